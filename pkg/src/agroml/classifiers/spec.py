"""Training specifications for the six crop-recommendation model families."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import InvalidSpec

ALGORITHMS = (
    "decision_tree",
    "naive_bayes",
    "svm",
    "logistic_regression",
    "random_forest",
    "gradient_boosted_trees",
)


@dataclass(frozen=True)
class ClassifierSpec:
    """Algorithm tag plus hyperparameters; fields not used by an algorithm
    are ignored by it.

    Defaults follow the benchmark configuration: entropy/depth-5 decision
    tree, 20-tree forest with per-node sqrt(d) feature subsampling,
    degree-3 polynomial-kernel SVM at C=3 on 0-1 scaled inputs, softmax
    logistic regression on standardized features, Gaussian naive Bayes,
    and 100-round depth-3 boosted trees with 0.3 shrinkage.
    """

    algorithm: str
    # trees / forest / boosting
    max_depth: int | None = 5
    n_estimators: int = 20
    bootstrap: bool = True
    seed: int = 0
    # svm
    c: float = 3.0
    kernel_degree: int = 3
    smo_tolerance: float = 1e-3
    smo_max_passes: int = 10_000
    # logistic regression
    l2: float = 1.0
    learning_rate: float = 0.5
    max_epochs: int = 6000
    tolerance: float = 1e-6
    # naive bayes
    var_smoothing: float = 1e-9
    # boosting
    n_rounds: int = 100
    shrinkage: float = 0.3
    boost_max_depth: int = 3

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidSpec(f"unknown algorithm {self.algorithm!r}; valid: {ALGORITHMS}")
        positive = {
            "n_estimators": self.n_estimators,
            "c": self.c,
            "kernel_degree": self.kernel_degree,
            "learning_rate": self.learning_rate,
            "max_epochs": self.max_epochs,
            "var_smoothing": self.var_smoothing,
            "shrinkage": self.shrinkage,
            "boost_max_depth": self.boost_max_depth,
        }
        for name, value in positive.items():
            if value <= 0:
                raise InvalidSpec(f"{name} must be > 0, got {value}")
        if self.l2 < 0:
            raise InvalidSpec(f"l2 must be >= 0, got {self.l2}")
        if self.n_rounds < 0:
            raise InvalidSpec(f"n_rounds must be >= 0, got {self.n_rounds}")
        if self.max_depth is not None and self.max_depth < 1:
            raise InvalidSpec(f"max_depth must be >= 1, got {self.max_depth}")

    def with_seed(self, seed: int) -> "ClassifierSpec":
        return replace(self, seed=seed)


def decision_tree(max_depth: int | None = 5) -> ClassifierSpec:
    return ClassifierSpec("decision_tree", max_depth=max_depth)


def naive_bayes(var_smoothing: float = 1e-9) -> ClassifierSpec:
    return ClassifierSpec("naive_bayes", var_smoothing=var_smoothing)


def svm(c: float = 3.0, kernel_degree: int = 3) -> ClassifierSpec:
    return ClassifierSpec("svm", c=c, kernel_degree=kernel_degree)


def logistic_regression(l2: float = 1.0, learning_rate: float = 0.5,
                        max_epochs: int = 6000, tolerance: float = 1e-6) -> ClassifierSpec:
    return ClassifierSpec("logistic_regression", l2=l2, learning_rate=learning_rate,
                          max_epochs=max_epochs, tolerance=tolerance)


def random_forest(n_estimators: int = 20, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec("random_forest", n_estimators=n_estimators,
                          max_depth=None, seed=seed)


def gradient_boosted_trees(n_rounds: int = 100, shrinkage: float = 0.3,
                           max_depth: int = 3, seed: int = 0) -> ClassifierSpec:
    return ClassifierSpec("gradient_boosted_trees", n_rounds=n_rounds,
                          shrinkage=shrinkage, boost_max_depth=max_depth, seed=seed)
