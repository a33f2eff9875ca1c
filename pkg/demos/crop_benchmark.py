"""Walk through the crop-recommendation benchmark.

Loads the bundled 22-crop dataset, cross-validates each of the six model
families on stratified 5-fold splits, and finishes with the random
forest's feature importances. The full six-model run takes a minute or
two; pass --fast to restrict it to the quick models.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from agroml import classifiers
from agroml.classifiers import feature_importance
from agroml.crossval import cross_validate
from agroml.tabular import load_crop_dataset

DATA = Path(__file__).resolve().parent.parent / "data" / "crop_recommendation.csv"

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--fast", action="store_true", help="skip the slow models")
parser.add_argument("--seed", type=int, default=42)
args = parser.parse_args()

dataset = load_crop_dataset(DATA)
print(f"dataset: {len(dataset)} samples, {len(dataset.class_names)} crops")
print(f"features: {', '.join(dataset.feature_names)}")
print()

models = [
    ("decision tree (entropy, depth 5)", classifiers.decision_tree()),
    ("gaussian naive bayes", classifiers.naive_bayes()),
    ("random forest (20 trees)", classifiers.random_forest(seed=args.seed)),
]
if not args.fast:
    models += [
        ("svm (poly-3 kernel, C=3)", classifiers.svm()),
        ("logistic regression", classifiers.logistic_regression()),
        ("gradient boosted trees", classifiers.gradient_boosted_trees(seed=args.seed)),
    ]

print(f"{'model':<34} {'mean':>7}  folds")
for name, spec in models:
    t0 = time.perf_counter()
    report = cross_validate(spec, dataset, 5, seed=args.seed)
    folds = " ".join(f"{a:.3f}" for a in report.fold_accuracies)
    print(f"{name:<34} {report.mean_accuracy:7.4f}  [{folds}]  {time.perf_counter()-t0:5.1f}s")

print()
print("feature importances of the forest trained on the full dataset:")
forest = classifiers.train(classifiers.random_forest(seed=args.seed),
                           dataset.feature_matrix(), dataset.labels())
weights = feature_importance(forest)
for i in np.argsort(-weights):
    bar = "#" * int(round(40 * weights[i]))
    print(f"  {dataset.feature_names[i]:<12} {weights[i]:.4f} {bar}")
