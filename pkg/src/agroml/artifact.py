"""Versioned binary container for trained models.

Layout: 6-byte magic ``AGROML``, 1-byte format version, 8-byte big-endian
body length, JSON body, 32-byte SHA-256 over everything before it. Arrays
are embedded as base64-encoded little-endian float64 so predictions
round-trip bit for bit.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import asdict

import numpy as np

from .classifiers import (
    ClassifierSpec,
    DecisionTreeModel,
    GradientBoostedTreesModel,
    LogisticRegressionModel,
    NaiveBayesModel,
    RandomForestModel,
    SvmModel,
    TrainedClassifier,
)
from .classifiers.trees import TreeNode
from .errors import CorruptArtifact, UnsupportedModel, VersionUnsupported
from .tabular import ScalerParams

MAGIC = b"AGROML"
FORMAT_VERSION = 1


def _encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype=np.float64)
    return {"shape": list(a.shape),
            "data": base64.b64encode(a.astype("<f8").tobytes()).decode("ascii")}


def _decode_array(d: dict) -> np.ndarray:
    raw = base64.b64decode(d["data"])
    return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(d["shape"])


def _payload(model: TrainedClassifier) -> dict:
    if isinstance(model, DecisionTreeModel):
        return {"root": model.root.to_dict(), "n_features": model.n_features}
    if isinstance(model, RandomForestModel):
        return {"roots": [r.to_dict() for r in model.roots],
                "n_features": model.n_features}
    if isinstance(model, GradientBoostedTreesModel):
        return {"rounds": [[t.to_dict() for t in trees] for trees in model.rounds],
                "n_features": model.n_features}
    if isinstance(model, NaiveBayesModel):
        return {"means": _encode_array(model.means),
                "variances": _encode_array(model.variances),
                "log_priors": _encode_array(model.log_priors)}
    if isinstance(model, LogisticRegressionModel):
        return {"weights": _encode_array(model.weights),
                "bias": _encode_array(model.bias),
                "mean": _encode_array(model.mean),
                "scale": _encode_array(model.scale)}
    if isinstance(model, SvmModel):
        return {"heads": [{"sv": _encode_array(h["sv"]),
                           "coef": _encode_array(h["coef"]),
                           "b": h["b"]} for h in model.heads]}
    raise UnsupportedModel(f"cannot serialize {type(model).__name__}")


def _rebuild(spec: ClassifierSpec, class_names, scaler, payload) -> TrainedClassifier:
    if spec.algorithm == "decision_tree":
        return DecisionTreeModel(spec, class_names, TreeNode.from_dict(payload["root"]),
                                 payload["n_features"])
    if spec.algorithm == "random_forest":
        roots = [TreeNode.from_dict(r) for r in payload["roots"]]
        return RandomForestModel(spec, class_names, roots, payload["n_features"])
    if spec.algorithm == "gradient_boosted_trees":
        rounds = [[TreeNode.from_dict(t) for t in trees] for trees in payload["rounds"]]
        return GradientBoostedTreesModel(spec, class_names, rounds, payload["n_features"])
    if spec.algorithm == "naive_bayes":
        return NaiveBayesModel(spec, class_names, _decode_array(payload["means"]),
                               _decode_array(payload["variances"]),
                               _decode_array(payload["log_priors"]))
    if spec.algorithm == "logistic_regression":
        return LogisticRegressionModel(spec, class_names,
                                       _decode_array(payload["weights"]),
                                       _decode_array(payload["bias"]),
                                       _decode_array(payload["mean"]),
                                       _decode_array(payload["scale"]),
                                       loss_history=np.array([]))
    if spec.algorithm == "svm":
        heads = [{"sv": _decode_array(h["sv"]), "coef": _decode_array(h["coef"]),
                  "b": h["b"]} for h in payload["heads"]]
        return SvmModel(spec, class_names, scaler, heads)
    raise UnsupportedModel(f"cannot rebuild algorithm {spec.algorithm!r}")


def pack_container(body: dict) -> bytes:
    """Wrap a JSON-serializable body in the magic/version/checksum frame."""
    encoded = json.dumps(body, sort_keys=True).encode("utf-8")
    head = MAGIC + bytes([FORMAT_VERSION]) + len(encoded).to_bytes(8, "big") + encoded
    return head + hashlib.sha256(head).digest()


def unpack_container(blob: bytes) -> dict:
    if len(blob) < len(MAGIC) + 1 + 8 + 32:
        raise CorruptArtifact("artifact too short")
    if blob[:len(MAGIC)] != MAGIC:
        raise CorruptArtifact("bad magic")
    version = blob[len(MAGIC)]
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"format version {version} not supported")
    offset = len(MAGIC) + 1
    length = int.from_bytes(blob[offset:offset + 8], "big")
    body_end = offset + 8 + length
    if len(blob) != body_end + 32:
        raise CorruptArtifact("artifact length does not match header")
    digest = hashlib.sha256(blob[:body_end]).digest()
    if digest != blob[body_end:]:
        raise CorruptArtifact("checksum mismatch")
    return json.loads(blob[offset + 8:body_end].decode("utf-8"))


def save_model(model: TrainedClassifier) -> bytes:
    scaler = getattr(model, "scaler", None)
    body = {
        "kind": "classifier",
        "algorithm": model.spec.algorithm,
        "spec": asdict(model.spec),
        "class_names": list(model.class_names),
        "scaler": None if scaler is None else {"lo": _encode_array(scaler.lo),
                                               "hi": _encode_array(scaler.hi)},
        "payload": _payload(model),
    }
    return pack_container(body)


def load_model(blob: bytes) -> TrainedClassifier:
    body = unpack_container(blob)
    if body.get("kind", "classifier") != "classifier":
        raise CorruptArtifact(f"not a classifier artifact: kind={body.get('kind')!r}")
    spec = ClassifierSpec(**dict(body["spec"]))
    scaler = None
    if body["scaler"] is not None:
        scaler = ScalerParams(lo=_decode_array(body["scaler"]["lo"]),
                              hi=_decode_array(body["scaler"]["hi"]))
    return _rebuild(spec, tuple(body["class_names"]), scaler, body["payload"])
