import numpy as np
import pytest

from agroml import classifiers
from agroml.crossval import FoldTrainingError, cross_validate
from agroml.tabular import CropSample, Dataset, stratified_kfold


def toy_dataset(n_per=20, seed=0):
    """Label is the sign of the first feature: perfectly separable."""
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n_per):
        samples.append(CropSample(float(rng.uniform(1, 5)), 1, 1, 1, 50, 7, 10, "pos"))
        samples.append(CropSample(float(rng.uniform(-5, -1)), 1, 1, 1, 50, 7, 10, "neg"))
    return Dataset(samples=tuple(samples), class_names=("pos", "neg"))


class TestCrossValidate:
    def test_separable_stump_perfect(self):
        ds = toy_dataset()
        report = cross_validate(classifiers.decision_tree(max_depth=1), ds, 5, seed=0)
        assert report.mean_accuracy == 1.0
        assert len(report.fold_accuracies) == 5

    def test_every_sample_validated_once(self, crop_dataset):
        folds = stratified_kfold(crop_dataset, 5, seed=11)
        seen = np.zeros(len(crop_dataset), dtype=int)
        for f in range(5):
            seen[folds.fold_indices(f)] += 1
        assert np.all(seen == 1)

    def test_deterministic(self):
        ds = toy_dataset(seed=3)
        a = cross_validate(classifiers.decision_tree(), ds, 4, seed=5)
        b = cross_validate(classifiers.decision_tree(), ds, 4, seed=5)
        assert a.fold_accuracies == b.fold_accuracies

    def test_training_error_tagged_with_fold(self):
        ds = toy_dataset()
        bad_spec = classifiers.ClassifierSpec("svm", smo_max_passes=1)
        with pytest.raises(FoldTrainingError) as err:
            cross_validate(bad_spec, ds, 4, seed=1)
        assert err.value.fold == 0
