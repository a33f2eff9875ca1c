import numpy as np
import pytest

from agroml import classifiers
from agroml.artifact import FORMAT_VERSION, MAGIC, load_model, save_model
from agroml.errors import CorruptArtifact, VersionUnsupported
from agroml.predictor import load_predictor, save_predictor


def blobs(seed=0):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(-2, 1, size=(60, 3)), rng.normal(2, 1, size=(60, 3))])
    return X, ["a"] * 60 + ["b"] * 60


ALL_SPECS = [
    ("decision_tree", classifiers.decision_tree()),
    ("naive_bayes", classifiers.naive_bayes()),
    ("svm", classifiers.svm()),
    ("logistic_regression", classifiers.logistic_regression()),
    ("random_forest", classifiers.random_forest(n_estimators=5, seed=1)),
    ("gradient_boosted_trees", classifiers.gradient_boosted_trees(n_rounds=5, seed=1)),
]


class TestRoundTrip:
    @pytest.mark.parametrize("name,spec", ALL_SPECS, ids=[n for n, _ in ALL_SPECS])
    def test_bit_exact_predictions(self, name, spec):
        X, y = blobs()
        model = classifiers.train(spec, X, y)
        restored = load_model(save_model(model))
        rng = np.random.default_rng(42)
        probe = rng.normal(scale=3, size=(100, 3))
        assert np.array_equal(model.predict_proba(probe), restored.predict_proba(probe))
        assert restored.class_names == model.class_names
        assert restored.spec == model.spec

    def test_predictor_round_trip(self, blob_predictor):
        restored = load_predictor(save_predictor(blob_predictor))
        rng = np.random.default_rng(7)
        from agroml.image import RasterImage

        for _ in range(10):
            img = RasterImage(rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8))
            assert np.array_equal(blob_predictor.predict_proba(img),
                                  restored.predict_proba(img))


class TestArtifactValidation:
    def make_blob(self):
        X, y = blobs()
        return save_model(classifiers.train(classifiers.naive_bayes(), X, y))

    def test_magic_prefix(self):
        assert self.make_blob()[:6] == MAGIC == b"AGROML"

    def test_flipped_version_byte(self):
        blob = bytearray(self.make_blob())
        assert blob[6] == FORMAT_VERSION
        blob[6] = FORMAT_VERSION + 1
        with pytest.raises(VersionUnsupported):
            load_model(bytes(blob))

    def test_truncated(self):
        blob = self.make_blob()
        with pytest.raises(CorruptArtifact):
            load_model(blob[:-5])

    def test_flipped_payload_byte(self):
        blob = bytearray(self.make_blob())
        blob[60] ^= 0xFF
        with pytest.raises(CorruptArtifact):
            load_model(bytes(blob))

    def test_bad_magic(self):
        blob = bytearray(self.make_blob())
        blob[0] = ord("X")
        with pytest.raises(CorruptArtifact):
            load_model(bytes(blob))

    def test_wrong_kind(self, blob_predictor):
        with pytest.raises(CorruptArtifact):
            load_model(save_predictor(blob_predictor))
