"""Synthetic image fixtures: color-blob classes for exercising the
reference predictor, and leaf-with-lesion scenes for explanation demos.

Everything is seeded and pure numpy so fixtures are reproducible across
runs and machines.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .image import RasterImage, encode_png


def _disk(h, w, cy, cx, radius):
    ys, xs = np.mgrid[0:h, 0:w]
    return (ys - cy) ** 2 + (xs - cx) ** 2 <= radius ** 2


def blob_image(kind: str, rng: np.random.Generator, size: int = 64) -> RasterImage:
    """One sample of the two-class set: a red or green blob on a noisy
    gray background."""
    px = rng.integers(90, 150, size=(size, size, 3)).astype(np.uint8)
    cy, cx = rng.integers(size // 4, 3 * size // 4, size=2)
    radius = rng.integers(size // 6, size // 3)
    mask = _disk(size, size, cy, cx, radius)
    color = (200, 40, 40) if kind == "red_blob" else (40, 190, 40)
    jitter = rng.integers(-20, 20, size=3)
    px[mask] = np.clip(np.array(color) + jitter, 0, 255).astype(np.uint8)
    return RasterImage(px)


def write_blob_dataset(root: str | Path, per_class: int = 100, size: int = 64,
                       seed: int = 0) -> Path:
    """Write the red-blob/green-blob folder tree used by predictor tests."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    for kind in ("green_blob", "red_blob"):
        folder = root / kind
        folder.mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            image = blob_image(kind, rng, size)
            (folder / f"{kind}_{i:03d}.png").write_bytes(encode_png(image))
    return root


def leaf_image(diseased: bool, rng: np.random.Generator, size: int = 224) -> RasterImage:
    """A leaf-shaped green ellipse on a soil background; diseased leaves
    carry brown lesion spots."""
    px = np.zeros((size, size, 3), dtype=np.float64)
    px[..., 0] = 120 + rng.normal(0, 6, (size, size))
    px[..., 1] = 96 + rng.normal(0, 6, (size, size))
    px[..., 2] = 70 + rng.normal(0, 6, (size, size))
    ys, xs = np.mgrid[0:size, 0:size]
    cy, cx = size / 2 + rng.uniform(-8, 8), size / 2 + rng.uniform(-8, 8)
    leaf = ((ys - cy) / (size * 0.42)) ** 2 + ((xs - cx) / (size * 0.28)) ** 2 <= 1.0
    green = np.stack([40 + rng.normal(0, 5, (size, size)),
                      150 + rng.normal(0, 10, (size, size)),
                      50 + rng.normal(0, 5, (size, size))], axis=-1)
    px[leaf] = green[leaf]
    if diseased:
        for _spot in range(rng.integers(3, 6)):
            sy = int(cy + rng.uniform(-0.3, 0.3) * size)
            sx = int(cx + rng.uniform(-0.2, 0.2) * size)
            spot = _disk(size, size, sy, sx, rng.integers(size // 16, size // 9)) & leaf
            px[spot] = (150 + rng.normal(0, 8), 90 + rng.normal(0, 8), 30 + rng.normal(0, 6))
    return RasterImage(np.clip(px, 0, 255).astype(np.uint8))


def write_leaf_dataset(root: str | Path, per_class: int = 40, size: int = 224,
                       seed: int = 7) -> Path:
    """Write the healthy/blight leaf folder tree for demos and serving
    fixtures."""
    root = Path(root)
    rng = np.random.default_rng(seed)
    for kind, diseased in (("blight", True), ("healthy", False)):
        folder = root / kind
        folder.mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            image = leaf_image(diseased, rng, size)
            (folder / f"{kind}_{i:03d}.png").write_bytes(encode_png(image))
    return root
