"""Gradient-boosted trees for multiclass classification.

Each round fits one regression tree per class to the softmax residuals
(one-hot minus predicted probability) and adds its output scaled by the
shrinkage factor to the raw scores. Zero rounds means uniform output.
First-order updates only; no column sampling.
"""

from __future__ import annotations

import numpy as np

from .base import TrainedClassifier, softmax
from .trees import accumulate_importance, grow_regression_tree, tree_apply


class GradientBoostedTreesModel(TrainedClassifier):
    def __init__(self, spec, class_names, rounds, n_features):
        super().__init__(spec, class_names)
        self.rounds = rounds  # list of per-class tree lists, one list per round
        self._n_features = n_features

    @property
    def n_features(self) -> int:
        return self._n_features

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        scores = np.zeros((X.shape[0], self.n_classes))
        for trees in self.rounds:
            for c, root in enumerate(trees):
                scores[:, c] += self.spec.shrinkage * tree_apply(root, X)
        return scores

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.raw_scores(X))

    def importance_totals(self) -> np.ndarray:
        totals = np.zeros(self._n_features)
        for trees in self.rounds:
            for root in trees:
                accumulate_importance(root, totals)
        return totals


def train_gradient_boosted_trees(spec, X, class_names, y) -> GradientBoostedTreesModel:
    n = X.shape[0]
    n_classes = len(class_names)
    Y = np.zeros((n, n_classes))
    Y[np.arange(n), y] = 1.0
    scores = np.zeros((n, n_classes))
    rounds = []
    for _round in range(spec.n_rounds):
        P = softmax(scores)
        residuals = Y - P
        trees = []
        for c in range(n_classes):
            root = grow_regression_tree(X, residuals[:, c], spec.boost_max_depth)
            scores[:, c] += spec.shrinkage * tree_apply(root, X)
            trees.append(root)
        rounds.append(trees)
    return GradientBoostedTreesModel(spec, class_names, rounds, X.shape[1])
