"""Quantize channel planes and partition them into 4-connected segments.

Each of the three HSI planes is reduced to a small number of bins, then
split into maximal 4-connected equal-bin regions. Segment areas are what
the uncommon maps consume: the smaller a pixel's segment, the more it
stands out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

DEFAULT_BIN_COUNT = 8


@dataclass(frozen=True)
class BinPlane:
    """Per-pixel bin indices for one channel.

    bin_count includes the dedicated achromatic bin (always the last
    index) when an achromatic mask was applied.
    """

    bins: np.ndarray        # (h, w) int32
    bin_count: int
    circular: bool

    @property
    def shape(self) -> tuple[int, int]:
        return self.bins.shape


@dataclass(frozen=True)
class SegmentMap:
    """Partition of a bin plane into 4-connected uniform regions."""

    labels: np.ndarray           # (h, w) int32, ids 0..segment_count-1
    areas: np.ndarray            # (segment_count,) int64 pixel counts
    bin_of_segment: np.ndarray   # (segment_count,) int32

    @property
    def segment_count(self) -> int:
        return int(self.areas.size)

    @property
    def pixel_count(self) -> int:
        return int(self.labels.size)


def quantize(
    plane: np.ndarray,
    bin_count: int = DEFAULT_BIN_COUNT,
    circular: bool = False,
    achromatic_mask: np.ndarray | None = None,
) -> BinPlane:
    """Quantize a channel plane into uniform bins.

    Linear channels in [0, 1] use bin = min(floor(v * bin_count),
    bin_count - 1); hue uses wraparound bins of 360/bin_count degrees.
    Masked (achromatic) pixels land in one extra trailing bin.
    """
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    if circular:
        step = 360.0 / bin_count
        bins = np.floor_divide(plane, step).astype(np.int32) % bin_count
    else:
        bins = np.minimum((plane * bin_count).astype(np.int32), bin_count - 1)
    total = bin_count
    if achromatic_mask is not None:
        bins = np.where(achromatic_mask, np.int32(bin_count), bins)
        total = bin_count + 1
    return BinPlane(bins=bins.astype(np.int32), bin_count=total, circular=circular)


def connected_components(bp: BinPlane) -> SegmentMap:
    """Split a bin plane into maximal 4-connected equal-bin segments.

    Labels are assigned in raster-scan order of each component's first
    pixel, so identical planes always produce identical label maps.
    """
    labels, areas, bin_of = kernels.label_components(bp.bins)
    return SegmentMap(labels=labels, areas=areas, bin_of_segment=bin_of)
