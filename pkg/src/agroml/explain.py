"""Local surrogate explanations for image classifiers.

Pipeline: segment the image into superpixels, sample binary keep/drop
masks (the first sample is always the unperturbed all-ones reference),
render each masked image, collect the black-box probability of the target
class, weight samples by an exponential kernel on cosine distance from
the reference mask, fit a weighted ridge surrogate over the mask bits,
and rank segments by their positive surrogate coefficients.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ExplainTimeout,
    InconsistentSegmentCount,
    LengthMismatch,
    PredictorCallFailed,
    SegmentationFailure,
    SingularSystem,
    TooManySegments,
)
from .image import RasterImage
from .segmentation import SegmentMap, slic_segment

DEFAULT_KERNEL_WIDTH = 0.25
DEFAULT_RIDGE = 1.0
DEFAULT_TARGET_SEGMENTS = 50
DEFAULT_COMPACTNESS = 10.0
DEFAULT_SLIC_ITERATIONS = 10


def sample_masks(segment_count: int, n_samples: int, seed: int) -> np.ndarray:
    """(n_samples, segment_count) binary mask matrix; row 0 is all ones and
    the rest are i.i.d. Bernoulli(0.5), deterministic per seed."""
    if segment_count < 1 or n_samples < 1:
        raise ValueError("segment_count and n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    masks = np.ones((n_samples, segment_count), dtype=np.int8)
    if n_samples > 1:
        masks[1:] = (rng.random((n_samples - 1, segment_count)) < 0.5).astype(np.int8)
    return masks


class FillPolicy:
    MEAN = "mean"
    GRAY = "gray"


def apply_mask(image: RasterImage, segmap: SegmentMap, mask,
               fill: str = FillPolicy.MEAN) -> RasterImage:
    """Keep pixels of segments flagged 1; replace dropped segments by their
    own mean color (default) or flat gray 128."""
    mask = np.asarray(mask)
    if mask.shape != (segmap.n_segments,):
        raise LengthMismatch(
            f"mask length {mask.shape} vs {segmap.n_segments} segments")
    if segmap.labels.shape != image.pixels.shape[:2]:
        raise LengthMismatch("segment map does not match image dimensions")
    out = image.pixels.copy()
    dropped = np.flatnonzero(mask == 0)
    if dropped.size == 0:
        return RasterImage(out)
    if fill == FillPolicy.GRAY:
        for seg in dropped:
            out[segmap.labels == seg] = 128
    else:
        for seg in dropped:
            region = segmap.labels == seg
            mean_color = image.pixels[region].mean(axis=0)
            out[region] = np.rint(mean_color).astype(np.uint8)
    return RasterImage(out)


def kernel_weight(mask, width: float = DEFAULT_KERNEL_WIDTH) -> float:
    """exp(-d^2 / width^2) with d the cosine distance between the mask and
    the all-ones reference. The all-zero mask has no direction; it is
    assigned d = 1 and flagged with a warning."""
    mask = np.asarray(mask, dtype=np.float64)
    total = mask.sum()
    s = mask.size
    if total == 0:
        warnings.warn("all-zero mask has undefined cosine distance; using d=1",
                      RuntimeWarning, stacklevel=2)
        d = 1.0
    else:
        d = 1.0 - total / (np.sqrt(s) * np.sqrt(total))
    return float(np.exp(-(d * d) / (width * width)))


def fit_surrogate(masks, weights, target_probs, l2: float = DEFAULT_RIDGE):
    """Weighted ridge over mask bits: minimize
    sum_i w_i (y_i - beta.m_i - beta0)^2 + l2 * ||beta||^2, intercept
    unpenalized, solved by the normal equations.

    Returns (coefficients, intercept). Raises SingularSystem when l2 = 0
    and the design is rank-deficient (reported, never silently fixed).
    """
    M = np.asarray(masks, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    y = np.asarray(target_probs, dtype=np.float64)
    if M.ndim != 2 or w.shape != (M.shape[0],) or y.shape != (M.shape[0],):
        raise LengthMismatch("masks, weights and targets must align")
    X = np.hstack([M, np.ones((M.shape[0], 1))])
    A = X.T @ (X * w[:, None])
    penalty = np.ones(X.shape[1]) * float(l2)
    penalty[-1] = 0.0
    A += np.diag(penalty)
    rhs = X.T @ (w * y)
    try:
        np.linalg.cholesky(A)  # PD check: fails on rank-deficient l2=0 systems
        beta = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"normal equations are singular: {exc}") from exc
    if not np.all(np.isfinite(beta)):
        raise SingularSystem("normal equations produced non-finite coefficients")
    return beta[:-1], float(beta[-1])


@dataclass(frozen=True)
class Explanation:
    target_class: int
    coefficients: np.ndarray  # one per segment
    intercept: float
    top_segments: tuple[int, ...]  # positive-coefficient ids, descending
    n_samples: int
    seed: int

    def ranked_scores(self) -> list[tuple[int, float]]:
        return [(int(s), float(self.coefficients[s])) for s in self.top_segments]


def _rank_positive(coefficients: np.ndarray, top_k: int) -> tuple[int, ...]:
    order = np.argsort(-coefficients, kind="stable")
    ranked = [int(i) for i in order if coefficients[i] > 0]
    return tuple(ranked[:max(top_k, 0)])


def explain(image: RasterImage, predictor, target_class: int | None = None,
            n_samples: int = 1000, top_k: int = 10, seed: int = 0,
            l2: float = DEFAULT_RIDGE, kernel_width: float = DEFAULT_KERNEL_WIDTH,
            target_segments: int = DEFAULT_TARGET_SEGMENTS,
            compactness: float = DEFAULT_COMPACTNESS,
            slic_iterations: int = DEFAULT_SLIC_ITERATIONS,
            fill: str = FillPolicy.MEAN,
            parallelism: int = 1,
            budget_seconds: float | None = None) -> tuple[Explanation, SegmentMap]:
    """Run the full pipeline against a black-box ``predictor`` (a callable
    from RasterImage to a probability vector). Deterministic per seed.

    ``target_class`` defaults to the predictor's argmax on the unperturbed
    image. Predictor calls may run on up to ``parallelism`` threads; the
    surrogate always consumes results in mask order. ``budget_seconds``
    bounds the wall time of the predictor stage (ExplainTimeout).
    """
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    try:
        segmap = slic_segment(image, target_segments, compactness, slic_iterations)
    except TooManySegments:
        raise
    except Exception as exc:
        raise SegmentationFailure(f"segmentation failed: {exc}") from exc

    masks = sample_masks(segmap.n_segments, n_samples, seed)
    perturbed = (apply_mask(image, segmap, mask, fill) for mask in masks)

    def call(index_image):
        index, img = index_image
        if deadline is not None and time.monotonic() > deadline:
            raise ExplainTimeout(f"explanation budget of {budget_seconds}s exceeded")
        try:
            return np.asarray(predictor(img), dtype=np.float64)
        except ExplainTimeout:
            raise
        except Exception as exc:
            raise PredictorCallFailed(index, exc) from exc

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            probs = list(pool.map(call, enumerate(perturbed)))
    else:
        probs = [call(item) for item in enumerate(perturbed)]

    reference = probs[0]
    if target_class is None:
        target_class = int(np.argmax(reference))
    if not 0 <= target_class < reference.size:
        raise IndexError(f"target class {target_class} outside predictor output")

    weights = np.array([kernel_weight(mask, kernel_width) for mask in masks])
    targets = np.array([p[target_class] for p in probs])
    coefficients, intercept = fit_surrogate(masks, weights, targets, l2)
    explanation = Explanation(
        target_class=target_class,
        coefficients=coefficients,
        intercept=intercept,
        top_segments=_rank_positive(coefficients, top_k),
        n_samples=n_samples,
        seed=seed,
    )
    return explanation, segmap


OVERLAY_TINT = np.array([0.0, 255.0, 0.0])
OVERLAY_ALPHA = 0.35


def render_overlay(image: RasterImage, segmap: SegmentMap,
                   explanation: Explanation) -> RasterImage:
    """Tint the explanation's top segments green and outline their borders;
    every other pixel is left untouched."""
    if explanation.coefficients.shape[0] != segmap.n_segments:
        raise InconsistentSegmentCount(
            f"explanation covers {explanation.coefficients.shape[0]} segments, "
            f"map has {segmap.n_segments}")
    if segmap.labels.shape != image.pixels.shape[:2]:
        raise InconsistentSegmentCount("segment map does not match image dimensions")
    out = image.pixels.astype(np.float64)
    labels = segmap.labels
    selected = np.isin(labels, np.array(explanation.top_segments, dtype=labels.dtype)) \
        if explanation.top_segments else np.zeros_like(labels, dtype=bool)
    if not selected.any():
        return RasterImage(image.pixels.copy())
    out[selected] = (1.0 - OVERLAY_ALPHA) * out[selected] + OVERLAY_ALPHA * OVERLAY_TINT

    # 1-pixel outline: selected pixels adjacent to a different segment
    boundary = np.zeros_like(selected)
    boundary[1:, :] |= labels[1:, :] != labels[:-1, :]
    boundary[:-1, :] |= labels[:-1, :] != labels[1:, :]
    boundary[:, 1:] |= labels[:, 1:] != labels[:, :-1]
    boundary[:, :-1] |= labels[:, :-1] != labels[:, 1:]
    outline = boundary & selected
    out[outline] = OVERLAY_TINT
    return RasterImage(np.rint(out).astype(np.uint8))
