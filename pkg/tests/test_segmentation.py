import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phonecam.segmentation import BinPlane, connected_components, quantize

from oracles import flood_fill_partition


def canonical_partition(labels: np.ndarray) -> np.ndarray:
    """Relabel so ids follow first raster appearance (partition fingerprint)."""
    flat = np.asarray(labels).ravel()
    _, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty(order.size, dtype=np.int64)
    rank[order] = np.arange(order.size)
    return rank[inverse].reshape(np.asarray(labels).shape)


def random_plane(gen: np.random.Generator, max_side=16, max_bins=4) -> np.ndarray:
    h = int(gen.integers(1, max_side + 1))
    w = int(gen.integers(1, max_side + 1))
    bins = int(gen.integers(1, max_bins + 1))
    return gen.integers(0, bins, size=(h, w)).astype(np.int32)


class TestQuantize:
    def test_linear_example(self):
        bp = quantize(np.array([[0.49]]), bin_count=8)
        assert bp.bins[0, 0] == 3

    def test_linear_top_edge(self):
        assert quantize(np.array([[1.0]]), bin_count=8).bins[0, 0] == 7

    def test_hue_example(self):
        bp = quantize(np.array([[350.0]]), bin_count=8, circular=True)
        assert bp.bins[0, 0] == 7

    def test_hue_wraparound(self):
        assert quantize(np.array([[359.999]]), 8, circular=True).bins[0, 0] == 7
        assert quantize(np.array([[0.0]]), 8, circular=True).bins[0, 0] == 0

    def test_achromatic_bin(self):
        hue = np.array([[10.0, 10.0]])
        mask = np.array([[False, True]])
        bp = quantize(hue, bin_count=8, circular=True, achromatic_mask=mask)
        assert bp.bins[0, 0] == 0
        assert bp.bins[0, 1] == 8
        assert bp.bin_count == 9

    def test_bins_in_range(self, rng):
        values = rng.random((20, 20))
        bp = quantize(values, bin_count=8)
        assert bp.bins.min() >= 0 and bp.bins.max() <= 7


def plane(bins: np.ndarray) -> BinPlane:
    arr = np.asarray(bins, dtype=np.int32)
    return BinPlane(bins=arr, bin_count=int(arr.max()) + 1, circular=False)


class TestConnectedComponents:
    def test_uniform_plane(self):
        sm = connected_components(plane(np.zeros((4, 4), dtype=np.int32)))
        assert sm.segment_count == 1
        assert sm.areas.tolist() == [16]

    def test_two_halves(self):
        bins = np.zeros((4, 4), dtype=np.int32)
        bins[:, 2:] = 1
        sm = connected_components(plane(bins))
        assert sm.segment_count == 2
        assert sm.areas.tolist() == [8, 8]
        assert sm.bin_of_segment.tolist() == [0, 1]

    def test_diagonal_checker_not_connected(self):
        sm = connected_components(plane(np.array([[0, 1], [1, 0]])))
        assert sm.segment_count == 4
        assert sm.areas.tolist() == [1, 1, 1, 1]

    def test_labels_raster_ordered(self):
        bins = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.int32)
        sm = connected_components(plane(bins))
        # corners are four separate bin-0 segments, cross is one bin-1 segment
        assert sm.labels[0, 0] == 0
        assert sm.labels[0, 1] == 1
        assert sm.labels[0, 2] == 2
        assert sm.labels[1, 1] == 1
        assert sm.labels[2, 0] == 3
        assert sm.labels[2, 2] == 4
        assert sm.segment_count == 5

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=80, deadline=None)
    def test_partition_property(self, seed):
        gen = np.random.default_rng(seed)
        bins = random_plane(gen)
        sm = connected_components(plane(bins))
        assert int(sm.areas.sum()) == bins.size
        counts = np.bincount(sm.labels.ravel(), minlength=sm.segment_count)
        assert np.array_equal(counts, sm.areas)
        assert np.all(sm.areas > 0)
        assert sm.labels.min() == 0 and sm.labels.max() == sm.segment_count - 1

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_matches_flood_fill_oracle(self, seed):
        gen = np.random.default_rng(seed)
        bins = random_plane(gen)
        sm = connected_components(plane(bins))
        labels, areas, bin_of = flood_fill_partition(bins.tolist())
        assert sm.labels.tolist() == labels
        assert sm.areas.tolist() == areas
        assert sm.bin_of_segment.tolist() == bin_of

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_bin_permutation_leaves_partition(self, seed):
        gen = np.random.default_rng(seed)
        bins = random_plane(gen)
        perm = gen.permutation(int(bins.max()) + 1).astype(np.int32)
        sm_orig = connected_components(plane(bins))
        sm_perm = connected_components(plane(perm[bins]))
        assert np.array_equal(sm_orig.labels, sm_perm.labels)
        assert np.array_equal(sm_orig.areas, sm_perm.areas)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_rotation_equivariance(self, seed):
        gen = np.random.default_rng(seed)
        bins = random_plane(gen)
        rotated_labels = connected_components(plane(np.ascontiguousarray(np.rot90(bins)))).labels
        labels_rotated = np.rot90(connected_components(plane(bins)).labels)
        assert np.array_equal(canonical_partition(rotated_labels), canonical_partition(labels_rotated))
