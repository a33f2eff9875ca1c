"""Crop dataset loading, stratified folds, min-max scaling, and accuracy.

The dataset file is a UTF-8 CSV with the exact header
``N,P,K,temperature,humidity,ph,rainfall,label`` (LF or CRLF endings).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ClassTooSmall,
    EmptyFitSet,
    EmptyInput,
    HeaderMismatch,
    InvalidK,
    LengthMismatch,
    MissingFile,
    NonFiniteValue,
    RowParseError,
)

FEATURE_NAMES = ("N", "P", "K", "temperature", "humidity", "ph", "rainfall")
EXPECTED_HEADER = list(FEATURE_NAMES) + ["label"]


@dataclass(frozen=True)
class CropSample:
    """One row of the soil/weather dataset: 7 numeric features plus the crop label."""

    n: float
    p: float
    k: float
    temperature: float
    humidity: float
    ph: float
    rainfall: float
    label: str

    def features(self) -> tuple[float, ...]:
        return (self.n, self.p, self.k, self.temperature, self.humidity,
                self.ph, self.rainfall)


@dataclass(frozen=True)
class Dataset:
    samples: tuple[CropSample, ...]
    class_names: tuple[str, ...]
    feature_names: tuple[str, ...] = FEATURE_NAMES

    def __len__(self) -> int:
        return len(self.samples)

    def feature_matrix(self) -> np.ndarray:
        return np.array([s.features() for s in self.samples], dtype=np.float64)

    def label_indices(self) -> np.ndarray:
        index = {name: i for i, name in enumerate(self.class_names)}
        return np.array([index[s.label] for s in self.samples], dtype=np.intp)

    def labels(self) -> list[str]:
        return [s.label for s in self.samples]


_RANGE_CHECKS = {
    "humidity": (0.0, 100.0),
    "ph": (0.0, 14.0),
    "rainfall": (0.0, math.inf),
}


def load_crop_dataset(path: str | Path) -> Dataset:
    """Load the crop CSV, preserving row order; classes in first-appearance order.

    Raises MissingFile, HeaderMismatch, RowParseError (with row/column), or
    NonFiniteValue.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderMismatch(EXPECTED_HEADER, []) from None
        if [h.strip() for h in header] != EXPECTED_HEADER:
            raise HeaderMismatch(EXPECTED_HEADER, header)
        samples: list[CropSample] = []
        class_names: list[str] = []
        seen: set[str] = set()
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # trailing blank line
            if len(row) != 8:
                raise RowParseError(row_no, "*", f"expected 8 fields, got {len(row)}")
            values = []
            for col, text in zip(FEATURE_NAMES, row[:7]):
                try:
                    value = float(text)
                except ValueError:
                    raise RowParseError(row_no, col, f"not a number: {text!r}") from None
                if not math.isfinite(value):
                    raise NonFiniteValue(f"row {row_no}, column {col!r}: {text!r}")
                lo, hi = _RANGE_CHECKS.get(col, (-math.inf, math.inf))
                if not (lo <= value <= hi):
                    raise RowParseError(row_no, col, f"value {value} outside [{lo}, {hi}]")
                values.append(value)
            label = row[7].strip()
            if not label:
                raise RowParseError(row_no, "label", "empty label")
            samples.append(CropSample(*values, label=label))
            if label not in seen:
                seen.add(label)
                class_names.append(label)
    return Dataset(samples=tuple(samples), class_names=tuple(class_names))


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    assignment: np.ndarray  # per-sample fold index in [0, k)

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)


def stratified_kfold(dataset: Dataset, k: int, seed: int) -> FoldAssignment:
    """Seeded stratified fold assignment: per class, fold sizes differ by <= 1.

    Deterministic for fixed (dataset, k, seed). Remainder samples rotate
    across folds so total fold sizes stay balanced too.
    """
    if k < 2:
        raise InvalidK(f"k must be >= 2, got {k}")
    labels = dataset.labels()
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    for name in dataset.class_names:
        count = len(by_class.get(name, []))
        if count < k:
            raise ClassTooSmall(name, count, k)

    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=np.intp)
    rotate = 0
    for name in dataset.class_names:
        indices = np.array(by_class[name], dtype=np.intp)
        rng.shuffle(indices)
        base, rem = divmod(len(indices), k)
        # folds (rotate .. rotate+rem-1) mod k take one extra sample
        sizes = np.full(k, base, dtype=np.intp)
        for j in range(rem):
            sizes[(rotate + j) % k] += 1
        rotate = (rotate + rem) % k
        start = 0
        for fold, size in enumerate(sizes):
            assignment[indices[start:start + size]] = fold
            start += size
    return FoldAssignment(k=k, assignment=assignment)


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature min/max observed on the fitting set."""

    lo: np.ndarray
    hi: np.ndarray


def fit_minmax(samples: np.ndarray) -> ScalerParams:
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise EmptyFitSet("cannot fit a scaler on an empty set")
    if samples.ndim == 1:
        samples = samples[:, None]
    return ScalerParams(lo=samples.min(axis=0), hi=samples.max(axis=0))


def apply_minmax(params: ScalerParams, vectors: np.ndarray) -> np.ndarray:
    """(x - min) / (max - min); constant features map to 0, out-of-range
    inputs extrapolate linearly without clamping."""
    vectors = np.asarray(vectors, dtype=np.float64)
    span = params.hi - params.lo
    safe = np.where(span > 0, span, 1.0)
    scaled = (vectors - params.lo) / safe
    return np.where(span > 0, scaled, 0.0)


def accuracy(predicted, actual) -> float:
    """Fraction of matching positions."""
    predicted = list(predicted)
    actual = list(actual)
    if len(predicted) != len(actual):
        raise LengthMismatch(f"{len(predicted)} predictions vs {len(actual)} labels")
    if not predicted:
        raise EmptyInput("accuracy of empty lists is undefined")
    hits = sum(1 for p, a in zip(predicted, actual) if p == a)
    return hits / len(predicted)
