"""Single decision trees and bootstrap-aggregated random forests."""

from __future__ import annotations

import math

import numpy as np

from .base import TrainedClassifier
from .trees import accumulate_importance, grow_classification_tree, tree_apply


class DecisionTreeModel(TrainedClassifier):
    def __init__(self, spec, class_names, root, n_features):
        super().__init__(spec, class_names)
        self.root = root
        self._n_features = n_features

    @property
    def n_features(self) -> int:
        return self._n_features

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        return tree_apply(self.root, X)

    def importance_totals(self) -> np.ndarray:
        totals = np.zeros(self._n_features)
        accumulate_importance(self.root, totals)
        return totals


class RandomForestModel(TrainedClassifier):
    """Averages per-tree leaf distributions over bootstrap-trained trees."""

    def __init__(self, spec, class_names, roots, n_features):
        super().__init__(spec, class_names)
        self.roots = roots
        self._n_features = n_features

    @property
    def n_features(self) -> int:
        return self._n_features

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        acc = np.zeros((X.shape[0], self.n_classes))
        for root in self.roots:
            acc += tree_apply(root, X)
        return acc / len(self.roots)

    def importance_totals(self) -> np.ndarray:
        totals = np.zeros(self._n_features)
        for root in self.roots:
            accumulate_importance(root, totals)
        return totals


def train_decision_tree(spec, X, class_names, y) -> DecisionTreeModel:
    root = grow_classification_tree(X, y, len(class_names), spec.max_depth)
    return DecisionTreeModel(spec, class_names, root, X.shape[1])


def train_random_forest(spec, X, class_names, y) -> RandomForestModel:
    n, d = X.shape
    m = math.ceil(math.sqrt(d))  # features considered per node
    roots = []
    # per-tree seeds derive deterministically from the spec seed
    seeds = np.random.SeedSequence(spec.seed).spawn(spec.n_estimators)
    for seq in seeds:
        rng = np.random.default_rng(seq)
        if spec.bootstrap:
            rows = rng.integers(0, n, size=n)
            Xb, yb = X[rows], y[rows]
        else:
            Xb, yb = X, y
        roots.append(grow_classification_tree(
            Xb, yb, len(class_names), spec.max_depth, rng=rng,
            n_candidate_features=m))
    return RandomForestModel(spec, class_names, roots, d)
