"""Shared trained-model interface and input validation."""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, NonFiniteFeature, SingleClass


def validate_training_inputs(features, labels):
    """Common train() preconditions; returns (X, class_names, y_indices)."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"features must be 2-D, got shape {X.shape}")
    labels = list(labels)
    if X.shape[0] != len(labels):
        raise DimensionMismatch(f"{X.shape[0]} feature rows vs {len(labels)} labels")
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeature("feature matrix contains non-finite values")
    class_names: list = []
    seen = set()
    for label in labels:
        if label not in seen:
            seen.add(label)
            class_names.append(label)
    if len(class_names) < 2:
        raise SingleClass(f"need >= 2 distinct labels, got {len(class_names)}")
    index = {name: i for i, name in enumerate(class_names)}
    y = np.array([index[label] for label in labels], dtype=np.intp)
    return X, tuple(class_names), y


class TrainedClassifier:
    """Immutable trained model exposing probability prediction.

    ``predict_proba`` accepts a single feature vector or a matrix of rows
    and returns a distribution (or one per row) over ``class_names``.
    """

    def __init__(self, spec, class_names):
        self.spec = spec
        self.class_names = tuple(class_names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def n_features(self) -> int:
        raise NotImplementedError

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_proba(self, features) -> np.ndarray:
        X = np.asarray(features, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got shape {X.shape}")
        probs = self._proba_matrix(X)
        return probs[0] if single else probs

    def predict_index(self, features) -> np.ndarray | int:
        probs = self.predict_proba(features)
        # argmax breaks ties toward the lowest class index
        return int(np.argmax(probs)) if probs.ndim == 1 else np.argmax(probs, axis=1)

    def predict(self, features):
        idx = self.predict_index(features)
        if isinstance(idx, int):
            return self.class_names[idx]
        return [self.class_names[i] for i in idx]


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)
