"""The black-box image classifier contract behind disease prediction and
explanations.

Three handle kinds share one predict_proba surface:

* Stub — a fixed distribution, for tests and protocol conformance.
* Reference — a desk-scale trainable stand-in: images are downsampled,
  scaled by 1/255, flattened, and classified by multinomial softmax
  regression. It exists so the explanation and serving pipelines can be
  exercised end to end in minutes; it makes no accuracy claims beyond the
  synthetic fixtures.
* External — an out-of-process model reached over HTTP+JSON, for plugging
  in a full-scale classifier.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .artifact import _decode_array, _encode_array, pack_container, unpack_container
from .errors import (
    CorruptArtifact,
    ExternalUnavailable,
    MissingFile,
    ProtocolViolation,
    TooFewClasses,
    UnreadableImage,
)
from .image import RasterImage, decode_image, resize

DISTRIBUTION_TOLERANCE = 1e-6
DEFAULT_TIMEOUT_SECONDS = 30.0
DEFAULT_RETRIES = 2


def validate_distribution(probs: np.ndarray, n_labels: int) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape != (n_labels,):
        raise ProtocolViolation(
            f"expected {n_labels} probabilities, got shape {probs.shape}")
    if not np.all(np.isfinite(probs)) or np.any(probs < 0):
        raise ProtocolViolation("probabilities must be finite and >= 0")
    total = float(probs.sum())
    if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
        raise ProtocolViolation(f"probabilities sum to {total}, expected 1")
    return probs


class PredictorHandle:
    """Immutable handle exposing predict_proba(image) over a label list."""

    kind = "abstract"

    def __init__(self, labels):
        labels = tuple(labels)
        if not labels or len(set(labels)) != len(labels):
            raise ValueError("label list must be non-empty with unique entries")
        self.labels = labels

    def predict_proba(self, image: RasterImage) -> np.ndarray:
        raise NotImplementedError

    def predict(self, image: RasterImage) -> tuple[str, float]:
        probs = self.predict_proba(image)
        idx = int(np.argmax(probs))
        return self.labels[idx], float(probs[idx])


class StubPredictor(PredictorHandle):
    kind = "stub"

    def __init__(self, labels, distribution=None):
        super().__init__(labels)
        if distribution is None:
            distribution = np.full(len(self.labels), 1.0 / len(self.labels))
        self.distribution = validate_distribution(np.asarray(distribution, dtype=np.float64),
                                                  len(self.labels))

    def predict_proba(self, image: RasterImage) -> np.ndarray:
        return self.distribution.copy()


@dataclass(frozen=True)
class ReferenceTrainingConfig:
    input_size: int = 32
    learning_rate: float = 0.1
    epochs: int = 120
    batch_size: int = 32
    seed: int = 0
    pixel_scale: float = 255.0
    weight_decay: float = 1e-3
    # softmax temperature at predict time; desk-scale sets separate so
    # cleanly that raw logits saturate, which starves perturbation-based
    # explanations of gradient (argmax is unaffected)
    temperature: float = 25.0

    def __post_init__(self):
        for name in ("input_size", "learning_rate", "epochs", "batch_size", "pixel_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be >= 0")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")


class ReferencePredictor(PredictorHandle):
    kind = "reference"

    def __init__(self, labels, weights, bias, config: ReferenceTrainingConfig):
        super().__init__(labels)
        self.weights = weights  # (d, C)
        self.bias = bias        # (C,)
        self.config = config

    def _features(self, image: RasterImage) -> np.ndarray:
        size = self.config.input_size
        small = resize(image, size, size)
        return small.pixels.astype(np.float64).ravel() / self.config.pixel_scale

    def predict_proba(self, image: RasterImage) -> np.ndarray:
        z = (self._features(image) @ self.weights + self.bias) / self.config.temperature
        z -= z.max()
        e = np.exp(z)
        return e / e.sum()


class ExternalPredictor(PredictorHandle):
    """Bridge to an HTTP endpoint serving a full-scale model."""

    kind = "external"

    def __init__(self, endpoint: str, labels,
                 timeout: float = DEFAULT_TIMEOUT_SECONDS,
                 retries: int = DEFAULT_RETRIES,
                 session=None):
        super().__init__(labels)
        self.endpoint = endpoint
        self.timeout = timeout
        self.retries = retries
        self._session = session or requests

    def predict_proba(self, image: RasterImage) -> np.ndarray:
        probs, labels = call_external(self.endpoint, image, timeout=self.timeout,
                                      retries=self.retries, session=self._session)
        if tuple(labels) != self.labels:
            raise ProtocolViolation(
                f"endpoint labels {labels[:3]}... do not match the configured handle")
        return probs


def call_external(endpoint: str, image: RasterImage, *,
                  timeout: float = DEFAULT_TIMEOUT_SECONDS,
                  retries: int = DEFAULT_RETRIES,
                  session=None) -> tuple[np.ndarray, list[str]]:
    """One POST per call: the PNG-encoded image goes out base64-encoded and
    the reply's parallel labels/probs arrays come back validated."""
    from .image import encode_png  # local import to avoid cycle at module load

    session = session or requests
    payload = {"image_b64": base64.b64encode(encode_png(image)).decode("ascii"),
               "format": "png"}
    last_error = None
    for _attempt in range(retries + 1):
        try:
            response = session.post(endpoint, json=payload, timeout=timeout)
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code != 200:
            raise ProtocolViolation(f"endpoint returned HTTP {response.status_code}")
        try:
            body = response.json()
        except ValueError as exc:
            raise ProtocolViolation(f"endpoint reply is not JSON: {exc}") from exc
        if not isinstance(body, dict) or "labels" not in body or "probs" not in body:
            raise ProtocolViolation("reply must carry 'labels' and 'probs'")
        labels = body["labels"]
        probs = body["probs"]
        if not isinstance(labels, list) or not labels:
            raise ProtocolViolation("'labels' must be a non-empty list")
        if not isinstance(probs, list) or len(probs) != len(labels):
            raise ProtocolViolation(
                f"'probs' length {len(probs) if isinstance(probs, list) else '?'} "
                f"does not match {len(labels)} labels")
        return validate_distribution(np.array(probs, dtype=np.float64), len(labels)), \
            [str(l) for l in labels]
    raise ExternalUnavailable(f"cannot reach {endpoint}: {last_error}", retries)


def _load_training_set(image_dir: Path, config: ReferenceTrainingConfig):
    import hashlib

    classes = sorted(p.name for p in image_dir.iterdir() if p.is_dir())
    per_class = {}
    for name in classes:
        files = sorted(p for p in (image_dir / name).iterdir() if p.is_file())
        if files:
            per_class[name] = files
    labels = sorted(per_class)
    if len(labels) < 2 or any(len(per_class[name]) < 2 for name in labels):
        raise TooFewClasses(
            f"need >= 2 class folders with >= 2 images each under {image_dir}")
    size = config.input_size
    rows = []
    for ci, name in enumerate(labels):
        for path in per_class[name]:
            data = path.read_bytes()
            try:
                image = decode_image(data)
            except Exception as exc:
                raise UnreadableImage(path, str(exc)) from exc
            small = resize(image, size, size)
            features = small.pixels.astype(np.float64).ravel() / config.pixel_scale
            # keyed by (filename, content) so sample order -- and with it the
            # training trajectory -- does not depend on class folder names
            rows.append(((path.name, hashlib.sha256(data).hexdigest(), ci), features, ci))
    rows.sort(key=lambda r: r[0])
    X = np.array([r[1] for r in rows])
    y = np.array([r[2] for r in rows], dtype=np.intp)
    return X, y, labels


def _fit_softmax(X, y, labels, config: ReferenceTrainingConfig) -> ReferencePredictor:
    n, d = X.shape
    n_classes = len(labels)
    Y = np.zeros((n, n_classes))
    Y[np.arange(n), y] = 1.0
    W = np.zeros((d, n_classes))
    b = np.zeros(n_classes)
    rng = np.random.default_rng(config.seed)
    for _epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            Z = X[batch] @ W + b
            Z -= Z.max(axis=1, keepdims=True)
            E = np.exp(Z)
            P = E / E.sum(axis=1, keepdims=True)
            G = (P - Y[batch]) / batch.size
            W -= config.learning_rate * (X[batch].T @ G + config.weight_decay * W)
            b -= config.learning_rate * G.sum(axis=0)
    return ReferencePredictor(labels, W, b, config)


def train_reference_predictor(image_dir: str | Path,
                              config: ReferenceTrainingConfig = ReferenceTrainingConfig()
                              ) -> ReferencePredictor:
    """Train the desk-scale predictor on a one-subfolder-per-class tree.

    Deterministic per config seed; labels are the sorted subfolder names.
    """
    image_dir = Path(image_dir)
    if not image_dir.is_dir():
        raise MissingFile(f"image directory not found: {image_dir}")
    X, y, labels = _load_training_set(image_dir, config)
    return _fit_softmax(X, y, labels, config)


def train_reference_predictor_with_holdout(
        image_dir: str | Path,
        config: ReferenceTrainingConfig = ReferenceTrainingConfig(),
        holdout_fraction: float = 0.2) -> tuple[ReferencePredictor, float]:
    """Train on a seeded per-class split, measure holdout accuracy, then
    refit on everything. Returns (final handle, holdout accuracy)."""
    image_dir = Path(image_dir)
    if not image_dir.is_dir():
        raise MissingFile(f"image directory not found: {image_dir}")
    X, y, labels = _load_training_set(image_dir, config)
    rng = np.random.default_rng(config.seed)
    holdout_mask = np.zeros(y.size, dtype=bool)
    for c in range(len(labels)):
        rows = np.flatnonzero(y == c)
        rng.shuffle(rows)
        n_hold = max(1, int(round(holdout_fraction * rows.size)))
        holdout_mask[rows[:n_hold]] = True
    probe = _fit_softmax(X[~holdout_mask], y[~holdout_mask], labels, config)
    scores = X[holdout_mask] @ probe.weights + probe.bias
    holdout_accuracy = float((np.argmax(scores, axis=1) == y[holdout_mask]).mean())
    return _fit_softmax(X, y, labels, config), holdout_accuracy


def save_predictor(handle: ReferencePredictor) -> bytes:
    body = {
        "kind": "reference_predictor",
        "labels": list(handle.labels),
        "weights": _encode_array(handle.weights),
        "bias": _encode_array(handle.bias),
        "config": {
            "input_size": handle.config.input_size,
            "learning_rate": handle.config.learning_rate,
            "epochs": handle.config.epochs,
            "batch_size": handle.config.batch_size,
            "seed": handle.config.seed,
            "pixel_scale": handle.config.pixel_scale,
            "weight_decay": handle.config.weight_decay,
            "temperature": handle.config.temperature,
        },
    }
    return pack_container(body)


def load_predictor(blob: bytes) -> ReferencePredictor:
    body = unpack_container(blob)
    if body.get("kind") != "reference_predictor":
        raise CorruptArtifact(f"not a predictor artifact: kind={body.get('kind')!r}")
    config = ReferenceTrainingConfig(**body["config"])
    return ReferencePredictor(body["labels"], _decode_array(body["weights"]),
                              _decode_array(body["bias"]), config)


# --- disease catalog --------------------------------------------------------

GENERIC_CATALOG_ENTRY = {
    "display_name": None,
    "crop": "unknown",
    "disease": "unknown",
    "description": "No catalog entry exists for this label.",
    "remedy": "Consult a local agricultural extension office for guidance.",
}


@dataclass(frozen=True)
class DiseaseCatalog:
    entries: dict[str, dict]

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> list[str]:
        return sorted(self.entries)

    def covers(self, labels) -> list[str]:
        """Labels from the given list with no catalog entry."""
        return [l for l in labels if l not in self.entries]


def load_disease_catalog(path: str | Path) -> DiseaseCatalog:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"disease catalog not found: {path}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict) or not raw:
        raise CorruptArtifact("disease catalog must be a non-empty JSON object")
    entries = {}
    for label, entry in raw.items():
        if not isinstance(entry, dict):
            raise CorruptArtifact(f"catalog entry for {label!r} must be an object")
        merged = dict(GENERIC_CATALOG_ENTRY)
        merged.update(entry)
        if merged["display_name"] is None:
            merged["display_name"] = label
        merged["flagged"] = False
        entries[label] = merged
    return DiseaseCatalog(entries=entries)


def lookup_disease(catalog: DiseaseCatalog, label: str) -> dict:
    """Catalog entry for the label; unknown labels return a flagged generic
    entry rather than failing the serving path."""
    entry = catalog.entries.get(label)
    if entry is not None:
        return entry
    generic = dict(GENERIC_CATALOG_ENTRY)
    generic["display_name"] = label
    generic["flagged"] = True
    return generic
