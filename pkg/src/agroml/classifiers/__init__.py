"""Six crop-recommendation model families behind one train/predict contract."""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedModel
from .base import TrainedClassifier, validate_training_inputs
from .bayes import NaiveBayesModel, train_naive_bayes
from .boosting import GradientBoostedTreesModel, train_gradient_boosted_trees
from .forest import DecisionTreeModel, RandomForestModel, train_decision_tree, train_random_forest
from .linear import LogisticRegressionModel, train_logistic_regression
from .spec import (
    ALGORITHMS,
    ClassifierSpec,
    decision_tree,
    gradient_boosted_trees,
    logistic_regression,
    naive_bayes,
    random_forest,
    svm,
)
from .smo import SvmModel, train_svm
from .trees import entropy

_TRAINERS = {
    "decision_tree": train_decision_tree,
    "naive_bayes": train_naive_bayes,
    "svm": train_svm,
    "logistic_regression": train_logistic_regression,
    "random_forest": train_random_forest,
    "gradient_boosted_trees": train_gradient_boosted_trees,
}


def train(spec: ClassifierSpec, features, labels) -> TrainedClassifier:
    """Train the model named by the spec; deterministic given (spec, data)."""
    X, class_names, y = validate_training_inputs(features, labels)
    return _TRAINERS[spec.algorithm](spec, X, class_names, y)


def predict_proba(model: TrainedClassifier, features) -> np.ndarray:
    return model.predict_proba(features)


def predict(model: TrainedClassifier, features):
    return model.predict(features)


def feature_importance(model: TrainedClassifier) -> np.ndarray:
    """Mean decrease in impurity per feature, normalized to sum to 1.

    Only tree ensembles carry impurity decreases; other model kinds raise
    UnsupportedModel.
    """
    if not isinstance(model, (DecisionTreeModel, RandomForestModel,
                              GradientBoostedTreesModel)):
        raise UnsupportedModel(
            f"feature importance needs a tree model, got {model.spec.algorithm}")
    totals = model.importance_totals()
    norm = totals.sum()
    if norm <= 0:
        raise UnsupportedModel("model contains no splits")
    return totals / norm


__all__ = [
    "ALGORITHMS",
    "ClassifierSpec",
    "TrainedClassifier",
    "DecisionTreeModel",
    "NaiveBayesModel",
    "SvmModel",
    "LogisticRegressionModel",
    "RandomForestModel",
    "GradientBoostedTreesModel",
    "decision_tree",
    "naive_bayes",
    "svm",
    "logistic_regression",
    "random_forest",
    "gradient_boosted_trees",
    "entropy",
    "train",
    "predict",
    "predict_proba",
    "feature_importance",
]
