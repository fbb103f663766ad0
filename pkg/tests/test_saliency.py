import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phonecam.saliency import (
    DimensionMismatch,
    box_smooth,
    extract_points,
    fuse,
    uncommon_map,
)
from phonecam.segmentation import BinPlane, connected_components

from oracles import extract_points_bruteforce, uncommon_from_bins


def segmap_of(bins) -> "SegmentMap":
    arr = np.asarray(bins, dtype=np.int32)
    return connected_components(BinPlane(arr, int(arr.max()) + 1, False))


class TestUncommonMap:
    def test_uniform_image_scores_zero(self):
        u = uncommon_map(segmap_of(np.zeros((6, 8), dtype=np.int32)))
        assert np.all(u == 0.0)

    def test_single_odd_pixel(self):
        # 3x4 plane, one pixel in its own segment; oracle-derived values
        bins = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]]
        u = uncommon_map(segmap_of(bins))
        expected = np.array(uncommon_from_bins(bins))
        assert np.array_equal(u, expected)
        assert u[1, 1] == 11.0 / 12.0
        assert u[0, 0] == 1.0 - 11.0 / 12.0

    def test_areas_four_and_twelve(self):
        bins = [[1, 1, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
        u = uncommon_map(segmap_of(bins))
        assert u[0, 0] == 0.75
        assert u[3, 3] == 0.25

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_area(self, seed):
        gen = np.random.default_rng(seed)
        bins = gen.integers(0, 4, size=(gen.integers(2, 14), gen.integers(2, 14))).astype(np.int32)
        sm = segmap_of(bins)
        u = uncommon_map(sm)
        per_segment = u.ravel()[np.unique(sm.labels.ravel(), return_index=True)[1]]
        areas = sm.areas.astype(float)
        # smaller area must mean strictly larger uncommonness
        order = np.argsort(areas, kind="stable")
        sorted_u = per_segment[order]
        sorted_a = areas[order]
        for i in range(1, len(order)):
            if sorted_a[i] > sorted_a[i - 1]:
                assert sorted_u[i] < sorted_u[i - 1]
            else:
                assert sorted_u[i] == sorted_u[i - 1]

    def test_range_bound(self, rng):
        bins = rng.integers(0, 3, size=(9, 11)).astype(np.int32)
        u = uncommon_map(segmap_of(bins))
        n = 9 * 11
        assert np.all(u >= 0.0)
        assert np.all(u <= 1.0 - 1.0 / n)


class TestFuse:
    def test_zero_identity(self):
        z = np.zeros((3, 3))
        assert np.array_equal(fuse(z, z, z), z)

    def test_sum(self):
        a = np.full((1, 1), 0.5)
        b = np.full((1, 1), 0.25)
        c = np.full((1, 1), 0.125)
        assert fuse(a, b, c)[0, 0] == 0.875

    def test_commutative(self, rng):
        a, b, c = (rng.random((4, 5)) for _ in range(3))
        # equal up to float summation order
        assert np.allclose(fuse(a, b, c), fuse(c, b, a), rtol=0, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fuse(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))


class TestBoxSmooth:
    def test_radius_zero_identity(self, rng):
        m = rng.random((7, 9))
        assert np.array_equal(box_smooth(m, 0), m)

    def test_constant_stays_constant(self):
        m = np.full((10, 12), 1.75)
        out = box_smooth(m, 3)
        assert np.allclose(out, 1.75, atol=1e-12)

    def test_center_mean(self):
        m = np.zeros((3, 3))
        m[1, 1] = 9.0
        out = box_smooth(m, 1)
        assert out[1, 1] == pytest.approx(1.0)   # 9 over the full 3x3 window
        assert out[0, 0] == pytest.approx(9.0 / 4.0)  # corner window is 2x2


class TestExtractPoints:
    def test_single_positive_pixel(self):
        m = np.zeros((10, 10))
        m[4, 7] = 1.0
        points = extract_points(m, k=1, smooth_radius=0, suppress_radius=2)
        assert (points[0].x, points[0].y, points[0].rank) == (7, 4, 1)
        assert points[0].score == 1.0

    def test_constant_map_tie_breaks(self):
        m = np.ones((144, 192))
        points = extract_points(m, k=3, smooth_radius=0, suppress_radius=20)
        assert [(p.x, p.y) for p in points] == [(0, 0), (21, 0), (42, 0)]

    def test_three_blobs_match_bruteforce(self):
        m = np.zeros((30, 40))
        peaks = [(8, 5, 0.9), (30, 7, 0.6), (18, 24, 0.3)]
        for cx, cy, height in peaks:
            yy = np.arange(30)[:, None] - cy
            xx = np.arange(40)[None, :] - cx
            m += height * np.exp(-(yy * yy + xx * xx) / 6.0)
        points = extract_points(m, k=3, smooth_radius=0, suppress_radius=8)
        expected = extract_points_bruteforce(m.tolist(), k=3, suppress_radius=8)
        assert [(p.x, p.y, p.score) for p in points] == expected
        assert [(p.x, p.y) for p in points] == [(8, 5), (30, 7), (18, 24)]
        assert [p.rank for p in points] == [1, 2, 3]

    def test_scores_non_increasing(self, rng):
        m = rng.random((20, 25))
        points = extract_points(m, k=3, smooth_radius=1, suppress_radius=4)
        scores = [p.score for p in points]
        assert scores == sorted(scores, reverse=True)

    def test_pairwise_separation(self, rng):
        for _ in range(10):
            m = rng.random((60, 80))
            points = extract_points(m, k=3, smooth_radius=2, suppress_radius=12)
            for i in range(3):
                for j in range(i + 1, 3):
                    dx = points[i].x - points[j].x
                    dy = points[i].y - points[j].y
                    assert dx * dx + dy * dy >= 12 * 12

    def test_degenerate_tiny_map(self):
        points = extract_points(np.array([[5.0]]), k=3, smooth_radius=0, suppress_radius=3)
        assert [(p.x, p.y) for p in points] == [(0, 0), (0, 0), (0, 0)]
        assert points[0].score == 5.0
        assert points[1].score == 0.0

    def test_original_frame_mapping(self):
        m = np.zeros((144, 192))
        m[72, 96] = 1.0
        (p,) = extract_points(m, k=1, smooth_radius=0, suppress_radius=2,
                              crop_offset=(32, 24), factor=3)
        assert (p.x, p.y) == (96, 72)
        assert (p.x_orig, p.y_orig) == (32 + 96 * 3 + 1, 24 + 72 * 3 + 1)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_rotation_equivariance_when_separated(self, seed):
        gen = np.random.default_rng(seed)
        h, w = 40, 56
        m = np.zeros((h, w))
        # three isolated bumps with strictly ordered peaks, far apart;
        # bumps (not deltas) keep the smoothed maximum unique
        spots = []
        while len(spots) < 3:
            y = int(gen.integers(3, h - 3))
            x = int(gen.integers(3, w - 3))
            if all((y - sy) ** 2 + (x - sx) ** 2 > (2 * 9 + 4) ** 2 for sy, sx in spots):
                spots.append((y, x))
        yy = np.arange(h)[:, None]
        xx = np.arange(w)[None, :]
        for value, (y, x) in zip((1.0, 0.7, 0.4), spots):
            m += value * np.exp(-((yy - y) ** 2 + (xx - x) ** 2) / 4.0)
        points = extract_points(m, k=3, smooth_radius=1, suppress_radius=9)
        rotated = extract_points(np.ascontiguousarray(np.rot90(m)), k=3,
                                 smooth_radius=1, suppress_radius=9)
        # rot90 (counterclockwise): (x, y) -> (y, w-1-x) in the rotated frame
        expected = {(p.y, w - 1 - p.x) for p in points}
        assert {(p.x, p.y) for p in rotated} == expected
