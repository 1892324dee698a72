import numpy as np
import pytest

from novascout.errors import DimensionMismatchError
from novascout.saliency import (ScalarMap, gaussian_blur, interest_map, is_flat,
                                top_interest_points, uncommon_map)
from novascout.segmentation import SegmentLabelMap


def label_map_from_counts(shape, sizes):
    """Row-major label map with the given segment sizes (sums to H*W)."""
    assert sum(sizes) == shape[0] * shape[1]
    flat = np.concatenate([np.full(s, i, dtype=np.int32) for i, s in enumerate(sizes)])
    return SegmentLabelMap(labels=flat.reshape(shape), segment_count=len(sizes))


class TestUncommonMap:
    def test_single_segment_all_zero(self):
        lm = label_map_from_counts((5, 8), [40])
        u = uncommon_map(lm)
        assert np.all(u.values == 0.0)

    def test_two_segments_90_10(self):
        lm = label_map_from_counts((10, 10), [90, 10])
        u = uncommon_map(lm)
        assert u.values.ravel()[0] == pytest.approx(0.1)
        assert u.values.ravel()[-1] == pytest.approx(0.9)

    def test_three_equal_segments(self):
        lm = label_map_from_counts((3, 9), [9, 9, 9])
        u = uncommon_map(lm)
        assert np.allclose(u.values, 2.0 / 3.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_smaller_segment_strictly_higher_score(self, seed):
        rng = np.random.default_rng(seed)
        k = rng.integers(2, 7)
        sizes = sorted(rng.integers(1, 50, size=k).tolist())
        total = sum(sizes)
        lm = label_map_from_counts((1, total), sizes)
        u = uncommon_map(lm)
        scores = [u.values[0, np.argmax(lm.labels[0] == i)] for i in range(k)]
        for a, b in zip(sizes, sizes[1:]):
            ia, ib = sizes.index(a), sizes.index(b)
            if a < b:
                assert scores[ia] > scores[ib]


class TestInterestMap:
    def test_all_zero_inputs(self):
        z = ScalarMap(np.zeros((6, 6)))
        out = interest_map(z, z, z, sigma=2.0)
        assert np.all(out.values == 0.0)

    def test_constant_maps_sum_exactly(self):
        c = ScalarMap(np.full((8, 8), 0.25))
        out = interest_map(c, c, c, sigma=1.5)
        assert np.allclose(out.values, 0.75, atol=1e-12)

    def test_sigma_zero_returns_raw_sum(self):
        rng = np.random.default_rng(0)
        maps = [ScalarMap(rng.random((5, 5))) for _ in range(3)]
        out = interest_map(*maps, sigma=0.0)
        assert np.array_equal(out.values, sum(m.values for m in maps))

    def test_impulse_mass_conserved_interior(self):
        v = np.zeros((41, 41))
        v[20, 20] = 1.0
        blurred = gaussian_blur(v, sigma=2.0)
        assert blurred.sum() == pytest.approx(1.0, abs=1e-6)
        assert np.unravel_index(np.argmax(blurred), blurred.shape) == (20, 20)

    def test_linearity(self):
        rng = np.random.default_rng(1)
        maps = [rng.random((7, 9)) for _ in range(3)]
        out1 = interest_map(*(ScalarMap(m) for m in maps), sigma=1.0)
        out2 = interest_map(*(ScalarMap(2 * m) for m in maps), sigma=1.0)
        assert np.allclose(out2.values, 2 * out1.values, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            interest_map(ScalarMap(np.zeros((4, 4))), ScalarMap(np.zeros((4, 5))),
                         ScalarMap(np.zeros((4, 4))), sigma=1.0)


def make_bump(shape, cy, cx, height, sigma=2.0):
    yy, xx = np.mgrid[0:shape[0], 0:shape[1]]
    return height * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sigma**2))


class TestTopInterestPoints:
    def test_single_global_max_first(self):
        v = make_bump((30, 30), 11, 17, 5.0)
        pts = top_interest_points(ScalarMap(v), k=1, suppression_radius=3.0)
        assert (pts[0].y, pts[0].x) == (11, 17)

    def test_three_bumps_in_height_order(self):
        v = (make_bump((40, 60), 10, 10, 3.0)
             + make_bump((40, 60), 30, 30, 2.0)
             + make_bump((40, 60), 10, 50, 1.0))
        pts = top_interest_points(ScalarMap(v), k=3, suppression_radius=5.0)
        assert [(p.y, p.x) for p in pts] == [(10, 10), (30, 30), (10, 50)]
        assert pts[0].score >= pts[1].score >= pts[2].score

    def test_suppression_distance(self):
        rng = np.random.default_rng(4)
        v = gaussian_blur(rng.random((50, 50)), 1.5)
        radius = 7.0
        pts = top_interest_points(ScalarMap(v), k=3, suppression_radius=radius)
        assert len(pts) == 3
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = np.hypot(pts[i].y - pts[j].y, pts[i].x - pts[j].x)
                assert d >= radius

    def test_flat_map_deterministic_tiebreak(self):
        v = np.full((20, 20), 0.5)
        pts = top_interest_points(ScalarMap(v), k=3, suppression_radius=4.0)
        assert len(pts) == 3
        assert (pts[0].y, pts[0].x) == (0, 0)
        assert (pts[1].y, pts[1].x) == (0, 4)
        assert (pts[2].y, pts[2].x) == (0, 8)
        assert is_flat(ScalarMap(v))

    def test_nonflat_detection(self):
        v = np.zeros((5, 5))
        v[2, 2] = 1.0
        assert not is_flat(ScalarMap(v))

    def test_k_validation(self):
        with pytest.raises(ValueError):
            top_interest_points(ScalarMap(np.zeros((4, 4))), k=0, suppression_radius=1.0)
