"""Multinomial softmax regression trained by full-batch gradient descent.

The objective is the summed cross-entropy plus (l2/2)*||W||^2 with the
bias unpenalized, optimized on standardized features (the standardizer is
learned from the training set and embedded in the model). Training stops
when the per-sample loss improves by less than ``tolerance`` and raises
NonConvergence if the epoch cap is hit first.
"""

from __future__ import annotations

import numpy as np

from ..errors import NonConvergence
from .base import TrainedClassifier, softmax


class LogisticRegressionModel(TrainedClassifier):
    def __init__(self, spec, class_names, weights, bias, mean, scale, loss_history):
        super().__init__(spec, class_names)
        self.weights = weights   # (d, C)
        self.bias = bias         # (C,)
        self.mean = mean         # standardizer
        self.scale = scale
        self.loss_history = loss_history

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

    def _proba_matrix(self, X: np.ndarray) -> np.ndarray:
        Z = (X - self.mean) / self.scale
        return softmax(Z @ self.weights + self.bias)


def _mean_loss(P, Y, W, l2, n):
    ce = -np.log(np.clip(P[Y.astype(bool)], 1e-300, None)).sum() / n
    return ce + l2 * float((W * W).sum()) / (2.0 * n)


def train_logistic_regression(spec, X, class_names, y) -> LogisticRegressionModel:
    n, d = X.shape
    n_classes = len(class_names)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std > 0, std, 1.0)
    Z = (X - mean) / scale

    Y = np.zeros((n, n_classes))
    Y[np.arange(n), y] = 1.0
    W = np.zeros((d, n_classes))
    b = np.zeros(n_classes)
    lr = spec.learning_rate

    P = softmax(Z @ W + b)
    loss = _mean_loss(P, Y, W, spec.l2, n)
    history = [loss]
    for _epoch in range(spec.max_epochs):
        G = P - Y
        W -= lr * (Z.T @ G + spec.l2 * W) / n
        b -= lr * G.mean(axis=0)
        P = softmax(Z @ W + b)
        new_loss = _mean_loss(P, Y, W, spec.l2, n)
        history.append(new_loss)
        if abs(loss - new_loss) < spec.tolerance:
            loss = new_loss
            break
        loss = new_loss
    else:
        raise NonConvergence("logistic regression did not converge", spec.max_epochs)
    return LogisticRegressionModel(spec, class_names, W, b, mean, scale,
                                   np.array(history))
