"""Uncommon maps, the fused interest map, and interest-point extraction.

A pixel's uncommonness is 1 - A/N where A is the area of its segment and
N the pixel count of the image: pixels in small segments score high. The
interest map is the plain sum of the three channel maps, and the k
highest non-max-suppressed maxima of its (optionally smoothed) surface
are the points reported back to the operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .segmentation import SegmentMap

DEFAULT_SMOOTH_RADIUS = 2
DEFAULT_SUPPRESS_RADIUS = 20.0
DEFAULT_POINT_COUNT = 3


class DimensionMismatch(Exception):
    """Channel maps to fuse do not share one shape."""


@dataclass(frozen=True)
class InterestPoint:
    """One extracted maximum, in both coordinate frames."""

    x: int
    y: int
    x_orig: int
    y_orig: int
    score: float
    rank: int


def uncommon_map(sm: SegmentMap) -> np.ndarray:
    """Score every pixel by how small its segment is: u = 1 - A/N."""
    n = sm.pixel_count
    per_segment = 1.0 - sm.areas.astype(np.float64) / float(n)
    return per_segment[sm.labels]


def fuse(u_h: np.ndarray, u_s: np.ndarray, u_i: np.ndarray) -> np.ndarray:
    """Sum the three channel maps pixelwise; no reweighting."""
    if not (u_h.shape == u_s.shape == u_i.shape):
        raise DimensionMismatch(
            f"shapes differ: {u_h.shape} / {u_s.shape} / {u_i.shape}"
        )
    return u_h + u_s + u_i


def box_smooth(m: np.ndarray, radius: int) -> np.ndarray:
    """Mean filter over a (2r+1)^2 window, truncated at the borders.

    Windows are renormalized by their in-bounds pixel count, so constant
    maps stay exactly constant. radius 0 is the identity.
    """
    out = np.asarray(m, dtype=np.float64)
    if radius <= 0:
        return out.copy()
    h, w = out.shape
    integral = np.zeros((h + 1, w + 1), dtype=np.float64)
    integral[1:, 1:] = out.cumsum(axis=0).cumsum(axis=1)
    y0 = np.clip(np.arange(h) - radius, 0, None)
    y1 = np.clip(np.arange(h) + radius + 1, None, h)
    x0 = np.clip(np.arange(w) - radius, 0, None)
    x1 = np.clip(np.arange(w) + radius + 1, None, w)
    sums = (
        integral[np.ix_(y1, x1)]
        - integral[np.ix_(y0, x1)]
        - integral[np.ix_(y1, x0)]
        + integral[np.ix_(y0, x0)]
    )
    counts = (y1 - y0)[:, None] * (x1 - x0)[None, :]
    return sums / counts


def extract_points(
    interest: np.ndarray,
    k: int = DEFAULT_POINT_COUNT,
    smooth_radius: int = DEFAULT_SMOOTH_RADIUS,
    suppress_radius: float = DEFAULT_SUPPRESS_RADIUS,
    crop_offset: tuple[int, int] = (0, 0),
    factor: int = 1,
) -> list[InterestPoint]:
    """Pick the k strongest well-separated maxima of the interest map.

    The map is box-smoothed, then k times: take the global maximum (ties
    broken by smallest (y, x)) and zero the disc of suppress_radius
    around it. Should suppression ever cover the whole map, remaining
    picks fall back to the same tie-break over the zeroed surface.
    Coordinates are also mapped to the original frame through the crop
    offset and downsample factor.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if interest.size == 0:
        raise ValueError("interest map is empty")
    h, w = interest.shape
    smoothed = box_smooth(interest, smooth_radius)
    work = smoothed.copy()
    alive = np.ones((h, w), dtype=bool)
    ox, oy = crop_offset
    half = factor // 2
    r2 = float(suppress_radius) ** 2

    points: list[InterestPoint] = []
    for rank in range(1, k + 1):
        if alive.any():
            flat = int(np.argmax(np.where(alive, work, -np.inf)))
        else:
            flat = int(np.argmax(work))
        y, x = divmod(flat, w)
        score = float(work[y, x])
        yy = np.arange(h)[:, None] - y
        xx = np.arange(w)[None, :] - x
        disc = yy * yy + xx * xx <= r2
        work[disc] = 0.0
        alive[disc] = False
        points.append(
            InterestPoint(
                x=x,
                y=y,
                x_orig=ox + x * factor + half,
                y_orig=oy + y * factor + half,
                score=score,
                rank=rank,
            )
        )
    return points
