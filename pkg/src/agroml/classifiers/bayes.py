"""Gaussian naive Bayes with variance smoothing."""

from __future__ import annotations

import math

import numpy as np

from .base import TrainedClassifier, softmax


class NaiveBayesModel(TrainedClassifier):
    def __init__(self, spec, class_names, means, variances, log_priors):
        super().__init__(spec, class_names)
        self.means = means            # (C, d)
        self.variances = variances    # (C, d), smoothed
        self.log_priors = log_priors  # (C,)

    @property
    def n_features(self) -> int:
        return self.means.shape[1]

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        # log joint likelihood per class, then normalized via softmax
        diff = X[:, None, :] - self.means[None, :, :]         # (n, C, d)
        log_pdf = -0.5 * (np.log(2.0 * math.pi * self.variances)[None]
                          + diff * diff / self.variances[None])
        return softmax(log_pdf.sum(axis=2) + self.log_priors[None])


def train_naive_bayes(spec, X, class_names, y) -> NaiveBayesModel:
    n_classes = len(class_names)
    d = X.shape[1]
    means = np.zeros((n_classes, d))
    variances = np.zeros((n_classes, d))
    priors = np.zeros(n_classes)
    for c in range(n_classes):
        rows = X[y == c]
        means[c] = rows.mean(axis=0)
        variances[c] = rows.var(axis=0)
        priors[c] = rows.shape[0] / X.shape[0]
    # smoothing keeps degenerate (constant) features from zeroing the pdf
    epsilon = spec.var_smoothing * max(X.var(axis=0).max(), 1e-12)
    variances += epsilon
    return NaiveBayesModel(spec, class_names, means, variances, np.log(priors))
