from collections import deque

import numpy as np
import pytest

from agroml.errors import TooManySegments
from agroml.image import RasterImage
from agroml.segmentation import slic_segment


def four_connected(segmap) -> bool:
    for s in range(segmap.n_segments):
        mask = segmap.labels == s
        total = int(mask.sum())
        if total == 0:
            return False
        start = tuple(np.argwhere(mask)[0])
        seen = {start}
        queue = deque([start])
        while queue:
            y, x = queue.popleft()
            for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                if 0 <= ny < segmap.height and 0 <= nx < segmap.width \
                        and (ny, nx) not in seen and mask[ny, nx]:
                    seen.add((ny, nx))
                    queue.append((ny, nx))
        if len(seen) != total:
            return False
    return True


def smooth_noise_image(size=96, seed=0):
    from PIL import Image

    rng = np.random.default_rng(seed)
    base = rng.integers(0, 255, size=(size, size, 3), dtype=np.uint8)
    small = Image.fromarray(base).resize((size // 8, size // 8))
    return RasterImage(np.asarray(small.resize((size, size), Image.BILINEAR),
                                  dtype=np.uint8).copy())


class TestSlic:
    def test_single_segment(self):
        img = RasterImage(np.full((20, 30, 3), 10, dtype=np.uint8))
        sm = slic_segment(img, 1)
        assert sm.n_segments == 1
        assert (sm.labels == 0).all()

    def test_uniform_image_compact_grid(self):
        img = RasterImage(np.full((64, 64, 3), 90, dtype=np.uint8))
        sm = slic_segment(img, 16)
        assert sm.n_segments == 16
        assert four_connected(sm)
        # uniform color: segments decided spatially, so all equal size
        assert set(sm.segment_sizes()) == {256}

    def test_two_halves_boundary(self):
        px = np.zeros((64, 64, 3), dtype=np.uint8)
        px[:, :32] = (250, 10, 10)
        px[:, 32:] = (10, 10, 250)
        sm = slic_segment(RasterImage(px), 2, compactness=1.0)
        assert sm.n_segments == 2
        left = sm.labels[0, 0]
        for row in range(64):
            cols = np.nonzero(sm.labels[row] == left)[0]
            assert abs(int(cols.max()) - 31) <= 1

    def test_partition_and_bounds(self):
        img = smooth_noise_image()
        for target in (4, 12, 30):
            sm = slic_segment(img, target)
            assert 1 <= sm.n_segments <= 2 * target
            assert sm.segment_sizes().sum() == 96 * 96
            assert sm.segment_sizes().min() >= 1
            assert four_connected(sm)

    def test_deterministic(self):
        img = smooth_noise_image(seed=5)
        a = slic_segment(img, 20)
        b = slic_segment(img, 20)
        assert np.array_equal(a.labels, b.labels)

    def test_too_many_segments(self):
        img = RasterImage(np.zeros((4, 4, 3), dtype=np.uint8))
        with pytest.raises(TooManySegments):
            slic_segment(img, 17)
        with pytest.raises(TooManySegments):
            slic_segment(img, 0)
