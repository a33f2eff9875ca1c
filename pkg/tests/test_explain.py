import itertools
import math

import numpy as np
import pytest

from agroml.errors import (
    InconsistentSegmentCount,
    LengthMismatch,
    PredictorCallFailed,
    SingularSystem,
)
from agroml.explain import (
    Explanation,
    FillPolicy,
    apply_mask,
    explain,
    fit_surrogate,
    kernel_weight,
    render_overlay,
    sample_masks,
)
from agroml.image import RasterImage
from agroml.segmentation import slic_segment


def exhaustive_masks(s):
    return np.array(list(itertools.product([0, 1], repeat=s)), dtype=np.float64)


def quadrant_scene():
    px = np.zeros((64, 64, 3), dtype=np.uint8)
    px[:32, :32] = (200, 30, 30)
    px[:32, 32:] = (30, 200, 30)
    px[32:, :32] = (30, 30, 200)
    px[32:, 32:] = (200, 200, 30)
    image = RasterImage(px)
    quad = np.zeros((64, 64), dtype=bool)
    quad[:32, :32] = True

    def predictor(im):
        kept = (im.pixels == px).all(axis=2)
        frac = (kept & quad).sum() / quad.sum()
        return np.array([frac, 1.0 - frac])

    return image, predictor


class TestSampleMasks:
    def test_reference_first(self):
        assert sample_masks(3, 1, 0).tolist() == [[1, 1, 1]]

    def test_deterministic(self):
        a = sample_masks(8, 1000, 7)
        b = sample_masks(8, 1000, 7)
        assert np.array_equal(a, b)

    def test_bernoulli_half_concentration(self):
        masks = sample_masks(8, 1000, 123)
        assert masks[0].tolist() == [1] * 8
        assert 0.45 <= masks.mean() <= 0.55

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            sample_masks(0, 5, 0)
        with pytest.raises(ValueError):
            sample_masks(5, 0, 0)


class TestApplyMask:
    def setup_method(self):
        px = np.zeros((32, 32, 3), dtype=np.uint8)
        px[:, :16] = (200, 40, 40)
        px[:, 16:] = (40, 40, 200)
        self.image = RasterImage(px)
        self.segmap = slic_segment(self.image, 2, compactness=1.0)

    def test_all_ones_identity(self):
        out = apply_mask(self.image, self.segmap, [1, 1])
        assert np.array_equal(out.pixels, self.image.pixels)

    def test_all_zeros_gray(self):
        out = apply_mask(self.image, self.segmap, [0, 0], fill=FillPolicy.GRAY)
        assert (out.pixels == 128).all()

    def test_mean_fill_of_constant_region_is_identity(self):
        out = apply_mask(self.image, self.segmap, [0, 1], fill=FillPolicy.MEAN)
        assert np.array_equal(out.pixels, self.image.pixels)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            apply_mask(self.image, self.segmap, [1, 1, 1])


class TestKernelWeight:
    def test_all_ones_weight_one(self):
        assert kernel_weight([1, 1, 1, 1], 0.25) == 1.0
        assert kernel_weight([1] * 9, 5.0) == 1.0

    def test_frozen_closed_form(self):
        d = 1.0 - math.sqrt(2) / 2
        expected = math.exp(-(d * d) / 0.0625)
        assert kernel_weight([1, 1, 0, 0], 0.25) == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.2535, abs=2e-4)

    def test_monotone_as_bits_drop(self):
        # flipping any 1 to 0 never increases the weight (exhaustive, S<=10)
        for s in (3, 6, 10):
            for mask in itertools.product([0, 1], repeat=s):
                if sum(mask) == 0:
                    continue
                w = kernel_weight(list(mask), 0.25)
                for j in range(s):
                    if mask[j] == 1:
                        dropped = list(mask)
                        dropped[j] = 0
                        if sum(dropped) == 0:
                            continue
                        assert kernel_weight(dropped, 0.25) <= w + 1e-15

    def test_all_zeros_flagged(self):
        with pytest.warns(RuntimeWarning):
            w = kernel_weight([0, 0, 0], 0.25)
        assert w == pytest.approx(math.exp(-1 / 0.0625))
        assert 0 < w <= 1


class TestFitSurrogate:
    def test_exact_affine_recovery(self):
        masks = exhaustive_masks(4)
        y = 2 * masks[:, 0] - masks[:, 1] + 0.5
        coef, intercept = fit_surrogate(masks, np.ones(16), y, l2=0.0)
        assert coef == pytest.approx([2.0, -1.0, 0.0, 0.0], abs=1e-9)
        assert intercept == pytest.approx(0.5, abs=1e-9)

    def test_constant_target_under_ridge(self):
        masks = exhaustive_masks(4)
        coef, intercept = fit_surrogate(masks, np.ones(16), np.full(16, 0.7), l2=1.0)
        assert np.abs(coef).max() < 1e-12
        assert intercept == pytest.approx(0.7, abs=1e-12)

    def test_ridge_continuity_at_zero(self):
        masks = exhaustive_masks(5)
        rng = np.random.default_rng(3)
        y = rng.uniform(size=masks.shape[0])
        w = rng.uniform(0.1, 1.0, size=masks.shape[0])
        c0, b0 = fit_surrogate(masks, w, y, l2=0.0)
        c1, b1 = fit_surrogate(masks, w, y, l2=1e-12)
        assert c0 == pytest.approx(c1, abs=1e-6)
        assert b0 == pytest.approx(b1, abs=1e-6)

    def test_singular_reported(self):
        with pytest.raises(SingularSystem):
            fit_surrogate(np.ones((1, 4)), np.ones(1), np.ones(1), l2=0.0)

    def test_exhaustive_oracle_up_to_twelve_segments(self):
        # brute-force enumeration of all 2^S masks recovers any affine
        # predictor exactly at l2=0
        rng = np.random.default_rng(11)
        for s in (2, 5, 8, 12):
            masks = exhaustive_masks(s)
            true_coef = rng.uniform(-2, 2, size=s)
            true_intercept = float(rng.uniform(-1, 1))
            y = masks @ true_coef + true_intercept
            weights = np.array([kernel_weight(m) if m.sum() else 1e-8 for m in masks])
            coef, intercept = fit_surrogate(masks, weights, y, l2=0.0)
            assert coef == pytest.approx(true_coef, abs=1e-9)
            assert intercept == pytest.approx(true_intercept, abs=1e-9)


class TestExplainPipeline:
    def test_quadrant_segment_ranks_first(self):
        image, predictor = quadrant_scene()
        for n in (200, 2000):
            expl, segmap = explain(image, predictor, target_class=0, n_samples=n,
                                   seed=5, target_segments=4, compactness=1.0,
                                   fill=FillPolicy.GRAY)
            assert segmap.n_segments == 4
            quad_label = int(segmap.labels[10, 10])
            assert expl.top_segments[0] == quad_label

    def test_deterministic(self):
        image, predictor = quadrant_scene()
        kw = dict(target_class=0, n_samples=150, seed=9, target_segments=4,
                  compactness=1.0, fill=FillPolicy.GRAY)
        a, sa = explain(image, predictor, **kw)
        b, sb = explain(image, predictor, **kw)
        assert np.array_equal(a.coefficients, b.coefficients)
        assert a.top_segments == b.top_segments
        assert np.array_equal(sa.labels, sb.labels)

    def test_single_sample_singular(self):
        image, predictor = quadrant_scene()
        with pytest.raises(SingularSystem):
            explain(image, predictor, target_class=0, n_samples=1, seed=0,
                    target_segments=4, compactness=1.0, l2=0.0)

    def test_default_target_is_argmax(self):
        image, predictor = quadrant_scene()
        expl, _ = explain(image, predictor, n_samples=100, seed=1,
                          target_segments=4, compactness=1.0, fill=FillPolicy.GRAY)
        assert expl.target_class == 0  # all-ones reference keeps the quadrant

    def test_reference_weight_is_max(self):
        masks = sample_masks(6, 200, 3)
        weights = [kernel_weight(m) if m.sum() else 0.0 for m in masks]
        assert weights[0] == max(weights) == 1.0

    def test_mask_order_invariance(self):
        # fitting is invariant under permutation of the non-reference samples
        rng = np.random.default_rng(0)
        masks = sample_masks(5, 80, 21).astype(np.float64)
        y = masks @ rng.uniform(-1, 1, 5) + 0.3 + 0.01 * rng.standard_normal(80)
        weights = np.array([kernel_weight(m) for m in masks])
        c1, b1 = fit_surrogate(masks, weights, y, l2=1.0)
        perm = np.concatenate([[0], 1 + rng.permutation(79)])
        c2, b2 = fit_surrogate(masks[perm], weights[perm], y[perm], l2=1.0)
        assert c1 == pytest.approx(c2, abs=1e-9)
        assert b1 == pytest.approx(b2, abs=1e-9)

    def test_predictor_failure_carries_sample_index(self):
        image, predictor = quadrant_scene()
        calls = {"n": 0}

        def flaky(im):
            calls["n"] += 1
            if calls["n"] == 4:
                raise RuntimeError("boom")
            return predictor(im)

        with pytest.raises(PredictorCallFailed) as err:
            explain(image, flaky, target_class=0, n_samples=50, seed=2,
                    target_segments=4, compactness=1.0)
        assert err.value.sample_index == 3

    def test_parallel_matches_serial(self):
        image, predictor = quadrant_scene()
        kw = dict(target_class=0, n_samples=120, seed=4, target_segments=4,
                  compactness=1.0, fill=FillPolicy.GRAY)
        serial, _ = explain(image, predictor, parallelism=1, **kw)
        parallel, _ = explain(image, predictor, parallelism=4, **kw)
        assert np.array_equal(serial.coefficients, parallel.coefficients)


class TestRenderOverlay:
    def make_case(self):
        image, predictor = quadrant_scene()
        expl, segmap = explain(image, predictor, target_class=0, n_samples=150,
                               seed=5, target_segments=4, compactness=1.0,
                               fill=FillPolicy.GRAY)
        return image, segmap, expl

    def test_empty_topk_is_identity(self):
        image, segmap, expl = self.make_case()
        empty = Explanation(expl.target_class, expl.coefficients, expl.intercept,
                            (), expl.n_samples, expl.seed)
        out = render_overlay(image, segmap, empty)
        assert np.array_equal(out.pixels, image.pixels)

    def test_single_segment_fully_tinted(self):
        px = np.full((16, 16, 3), 50, dtype=np.uint8)
        image = RasterImage(px)
        segmap = slic_segment(image, 1)
        expl = Explanation(0, np.array([1.0]), 0.0, (0,), 10, 0)
        out = render_overlay(image, segmap, expl)
        assert (out.pixels != image.pixels).any(axis=2).all()

    def test_tinted_pixel_count_matches_segments(self):
        image, segmap, expl = self.make_case()
        out = render_overlay(image, segmap, expl)
        changed = (out.pixels != image.pixels).any(axis=2).sum()
        expected = sum(int((segmap.labels == s).sum()) for s in expl.top_segments)
        assert changed == expected

    def test_inconsistent_segment_count(self):
        image, segmap, expl = self.make_case()
        short = Explanation(0, np.array([0.5]), 0.0, (0,), 10, 0)
        with pytest.raises(InconsistentSegmentCount):
            render_overlay(image, segmap, short)
