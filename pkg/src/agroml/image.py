"""RGB8 raster images: decoding, encoding, resizing, and Lab conversion.

Pixels live in a (height, width, 3) uint8 numpy array, row-major. All
pipeline inputs are resized to 224x224 before segmentation/explanation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import UndecodableImage

PIPELINE_SIZE = 224


@dataclass(frozen=True)
class RasterImage:
    pixels: np.ndarray  # (h, w, 3) uint8

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.dtype != np.uint8:
            raise ValueError(f"expected (h, w, 3) uint8 pixels, got {p.shape} {p.dtype}")
        if p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError("image must be at least 1x1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def decode_image(data: bytes) -> RasterImage:
    """Decode PNG or JPEG bytes to RGB8."""
    try:
        with Image.open(io.BytesIO(data)) as img:
            rgb = img.convert("RGB")
            return RasterImage(np.asarray(rgb, dtype=np.uint8).copy())
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UndecodableImage(f"cannot decode image: {exc}") from exc


def encode_png(image: RasterImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image.pixels, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def resize(image: RasterImage, width: int, height: int) -> RasterImage:
    if image.width == width and image.height == height:
        return image
    resized = Image.fromarray(image.pixels, mode="RGB").resize(
        (width, height), resample=Image.BILINEAR)
    return RasterImage(np.asarray(resized, dtype=np.uint8).copy())


def to_pipeline_size(image: RasterImage) -> RasterImage:
    return resize(image, PIPELINE_SIZE, PIPELINE_SIZE)


def rgb_to_lab(pixels: np.ndarray) -> np.ndarray:
    """sRGB (uint8) to CIELAB (float64), D65 white point."""
    rgb = pixels.astype(np.float64) / 255.0
    linear = np.where(rgb <= 0.04045, rgb / 12.92, ((rgb + 0.055) / 1.055) ** 2.4)
    m = np.array([[0.4124564, 0.3575761, 0.1804375],
                  [0.2126729, 0.7151522, 0.0721750],
                  [0.0193339, 0.1191920, 0.9503041]])
    xyz = linear @ m.T
    white = np.array([0.95047, 1.0, 1.08883])
    ratio = xyz / white
    eps = (6.0 / 29.0) ** 3
    f = np.where(ratio > eps, np.cbrt(ratio), ratio / (3 * (6.0 / 29.0) ** 2) + 4.0 / 29.0)
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab
