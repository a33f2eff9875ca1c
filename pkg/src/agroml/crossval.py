"""K-fold cross-validation driver for the crop classifiers.

Each fold trains on the other k-1 folds and scores accuracy on its own;
any scaling a model needs (SVM min-max, logistic standardizer) is fit
inside train() on the training rows only, so folds never leak.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import classifiers
from .classifiers import ClassifierSpec
from .errors import AgromlError
from .tabular import Dataset, accuracy, stratified_kfold


@dataclass(frozen=True)
class CVReport:
    spec: ClassifierSpec
    fold_accuracies: tuple[float, ...]
    seed: int
    wall_seconds: float

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))


class FoldTrainingError(AgromlError):
    code = "fold_training_error"

    def __init__(self, fold, cause):
        super().__init__(f"training failed on fold {fold}: {cause}")
        self.fold = fold
        self.cause = cause


def cross_validate(spec: ClassifierSpec, dataset: Dataset, k: int, seed: int) -> CVReport:
    folds = stratified_kfold(dataset, k, seed)
    X = dataset.feature_matrix()
    labels = dataset.labels()
    started = time.perf_counter()
    fold_accuracies = []
    for fold in range(k):
        val_mask = folds.assignment == fold
        train_idx = np.flatnonzero(~val_mask)
        val_idx = np.flatnonzero(val_mask)
        try:
            model = classifiers.train(spec, X[train_idx],
                                      [labels[i] for i in train_idx])
        except AgromlError as exc:
            raise FoldTrainingError(fold, exc) from exc
        predicted = model.predict(X[val_idx])
        fold_accuracies.append(accuracy(predicted, [labels[i] for i in val_idx]))
    return CVReport(spec=spec, fold_accuracies=tuple(fold_accuracies), seed=seed,
                    wall_seconds=time.perf_counter() - started)
