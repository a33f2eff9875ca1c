"""Rule-based fertilizer recommendation from soil N/P/K versus per-crop
ideal values.

The driving nutrient is the one with the largest absolute deviation
(ideal - soil), ties resolved N before P before K. A deviation above the
tolerance yields <nutrient>_LOW when the soil is short and <nutrient>_HIGH
when it is over; when all three deviations are within tolerance the
explicit BALANCED outcome is returned instead of forcing a corrective
class.
"""

from __future__ import annotations

import csv
import difflib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    DuplicateCrop,
    HeaderMismatch,
    MissingFile,
    NegativeInput,
    RowParseError,
    UnknownCrop,
)

CLASSES = ("N_HIGH", "N_LOW", "P_HIGH", "P_LOW", "K_HIGH", "K_LOW", "BALANCED")

_FALLBACK_ADVICE = {
    "N_HIGH": "Soil nitrogen exceeds the crop's ideal level; hold off on nitrogen-rich fertilizer.",
    "N_LOW": "Soil nitrogen is below the crop's ideal level; apply a nitrogen-rich fertilizer.",
    "P_HIGH": "Soil phosphorus exceeds the crop's ideal level; hold off on phosphorus-rich fertilizer.",
    "P_LOW": "Soil phosphorus is below the crop's ideal level; apply a phosphorus-rich fertilizer.",
    "K_HIGH": "Soil potassium exceeds the crop's ideal level; hold off on potassium-rich fertilizer.",
    "K_LOW": "Soil potassium is below the crop's ideal level; apply a potassium-rich fertilizer.",
    "BALANCED": "Soil N, P and K match the crop's ideal levels; no corrective fertilizer needed.",
}


@dataclass(frozen=True)
class CropIdeal:
    name: str
    n: float
    p: float
    k: float
    ph: float | None = None
    soil_moisture: float | None = None


@dataclass(frozen=True)
class IdealNpkTable:
    crops: dict[str, CropIdeal]  # keyed by lower-cased name

    def __len__(self) -> int:
        return len(self.crops)

    def names(self) -> list[str]:
        return sorted(self.crops)

    def lookup(self, crop: str) -> CropIdeal:
        key = crop.strip().lower()
        entry = self.crops.get(key)
        if entry is None:
            by_similarity = sorted(
                self.crops, key=lambda name: difflib.SequenceMatcher(None, key, name).ratio(),
                reverse=True)
            raise UnknownCrop(crop, by_similarity[:3])
        return entry


@dataclass(frozen=True)
class FertilizerRecommendation:
    klass: str       # one of CLASSES
    nutrient: str    # "N", "P", "K", or "" for BALANCED
    deviation: float  # ideal - soil for the driving nutrient (0 for BALANCED)
    advice: str


def _find_column(header: list[str], *candidates_exact, contains=None):
    lowered = [h.strip().lower() for h in header]
    for cand in candidates_exact:
        if cand in lowered:
            return lowered.index(cand)
    if contains is not None:
        for i, h in enumerate(lowered):
            if contains in h:
                return i
    return None


def load_ideal_table(path: str | Path) -> IdealNpkTable:
    """Load the per-crop ideal N/P/K CSV; pH and soil-moisture columns are
    stored when present but never drive the rules."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"fertilizer table not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderMismatch(["Crop", "N", "P", "K"], []) from None
        crop_col = _find_column(header, "crop", contains="crop")
        n_col = _find_column(header, "n")
        p_col = _find_column(header, "p")
        k_col = _find_column(header, "k")
        if None in (crop_col, n_col, p_col, k_col):
            raise HeaderMismatch(["Crop", "N", "P", "K"], header)
        ph_col = _find_column(header, "ph")
        moist_col = _find_column(header, "soil_moisture", contains="moisture")

        crops: dict[str, CropIdeal] = {}
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            name = row[crop_col].strip()
            key = name.lower()
            if key in crops:
                raise DuplicateCrop(f"crop {name!r} listed more than once")
            values = {}
            for label, col in (("N", n_col), ("P", p_col), ("K", k_col)):
                try:
                    value = float(row[col])
                except (ValueError, IndexError):
                    raise RowParseError(row_no, label, f"bad value {row[col] if col < len(row) else '<missing>'!r}") from None
                if not math.isfinite(value) or value < 0:
                    raise RowParseError(row_no, label, f"ideal value must be finite and >= 0, got {value}")
                values[label] = value

            def optional(col):
                if col is None or col >= len(row) or not row[col].strip():
                    return None
                try:
                    return float(row[col])
                except ValueError:
                    return None

            crops[key] = CropIdeal(name=key, n=values["N"], p=values["P"], k=values["K"],
                                   ph=optional(ph_col), soil_moisture=optional(moist_col))
    return IdealNpkTable(crops=crops)


def load_advice_catalog(path: str | Path) -> dict[str, str]:
    """Editable mapping from the 7 outcome classes to display text."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"advice catalog not found: {path}")
    catalog = json.loads(path.read_text(encoding="utf-8"))
    missing = [c for c in CLASSES if c not in catalog]
    if missing:
        raise HeaderMismatch(list(CLASSES), list(catalog))
    return {c: str(catalog[c]) for c in CLASSES}


def recommend_fertilizer(table: IdealNpkTable, crop: str,
                         soil_n: float, soil_p: float, soil_k: float,
                         advice_catalog: dict[str, str] | None = None,
                         tolerance: float = 0.0) -> FertilizerRecommendation:
    for label, value in (("N", soil_n), ("P", soil_p), ("K", soil_k)):
        if not math.isfinite(value) or value < 0:
            raise NegativeInput(f"soil {label} must be finite and >= 0, got {value}")
    ideal = table.lookup(crop)
    advice = advice_catalog or _FALLBACK_ADVICE

    deviations = (("N", ideal.n - soil_n), ("P", ideal.p - soil_p), ("K", ideal.k - soil_k))
    nutrient, deviation = deviations[0]
    for cand_nutrient, cand_dev in deviations[1:]:
        if abs(cand_dev) > abs(deviation):  # strict: ties keep N > P > K priority
            nutrient, deviation = cand_nutrient, cand_dev
    if all(abs(d) <= tolerance for _, d in deviations):
        return FertilizerRecommendation("BALANCED", "", 0.0, advice["BALANCED"])
    klass = f"{nutrient}_{'LOW' if deviation > 0 else 'HIGH'}"
    return FertilizerRecommendation(klass, nutrient, deviation, advice[klass])
