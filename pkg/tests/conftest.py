"""Shared fixtures: the bundled datasets, synthetic image trees, and a
fully provisioned service app over temp-trained artifacts."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
SCHEMA_DIR = REPO_ROOT / "schemas"

CROP_CSV = DATA_DIR / "crop_recommendation.csv"
FERTILIZER_CSV = DATA_DIR / "fertilizer.csv"
ADVICE_JSON = DATA_DIR / "fertilizer_advice.json"
DISEASE_JSON = DATA_DIR / "disease_catalog.json"


@pytest.fixture(scope="session")
def crop_dataset():
    from agroml.tabular import load_crop_dataset

    return load_crop_dataset(CROP_CSV)


@pytest.fixture(scope="session")
def blob_dataset_dir(tmp_path_factory):
    from agroml.synthetic import write_blob_dataset

    root = tmp_path_factory.mktemp("blobs")
    return write_blob_dataset(root, per_class=100, seed=0)


@pytest.fixture(scope="session")
def blob_predictor(blob_dataset_dir):
    from agroml.predictor import ReferenceTrainingConfig, train_reference_predictor

    return train_reference_predictor(blob_dataset_dir, ReferenceTrainingConfig(seed=3))


@pytest.fixture(scope="session")
def leaf_dataset_dir(tmp_path_factory):
    from agroml.synthetic import write_leaf_dataset

    root = tmp_path_factory.mktemp("leaves")
    return write_leaf_dataset(root, per_class=20, size=128, seed=7)


@pytest.fixture(scope="session")
def crop_forest(crop_dataset):
    from agroml import classifiers

    return classifiers.train(classifiers.random_forest(seed=42),
                             crop_dataset.feature_matrix(), crop_dataset.labels())


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())


@pytest.fixture(scope="session")
def service_artifacts(tmp_path_factory, crop_forest, leaf_dataset_dir):
    """Trained artifacts + config files for the service tests."""
    from agroml.artifact import save_model
    from agroml.predictor import ReferenceTrainingConfig, save_predictor, train_reference_predictor

    root = tmp_path_factory.mktemp("artifacts")
    crop_path = root / "crop_model.agroml"
    crop_path.write_bytes(save_model(crop_forest))
    predictor = train_reference_predictor(leaf_dataset_dir, ReferenceTrainingConfig(seed=11))
    predictor_path = root / "predictor.agroml"
    predictor_path.write_bytes(save_predictor(predictor))
    return {
        "crop_model_path": str(crop_path),
        "predictor_path": str(predictor_path),
        "fertilizer_csv_path": str(FERTILIZER_CSV),
        "advice_catalog_path": str(ADVICE_JSON),
        "disease_catalog_path": str(DISEASE_JSON),
    }


@pytest.fixture(scope="session")
def service_client(service_artifacts):
    from fastapi.testclient import TestClient

    from agroml.service import ServiceConfig, create_app

    config = ServiceConfig(**service_artifacts, explain_samples=60,
                           explain_budget_seconds=30.0)
    app = create_app(config)
    with TestClient(app, raise_server_exceptions=False) as client:
        yield client
