"""Decoding, geometric normalization and HSI conversion of captures.

Rasters are numpy arrays of shape (height, width, 3), dtype uint8, RGB
order. Every analysis runs on the standard 192x144 raster produced by
:func:`preprocess`; a 640x480 capture is center-cropped to 576x432 and
block-downsampled by 3, other sizes get the largest centered window
commensurate with the 192x144 grid.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

STANDARD_WIDTH = 192
STANDARD_HEIGHT = 144
DEFAULT_S_MIN = 0.1


class ImagingError(Exception):
    """Base class for raster-level failures."""


class CorruptImage(ImagingError):
    """The byte stream could not be decoded."""


class UnsupportedFormat(ImagingError):
    """Decodable, but not a PNG or JPEG payload."""


class TargetTooLarge(ImagingError):
    """Crop window exceeds the source dimensions."""


class NotDivisible(ImagingError):
    """Image dimensions are not a multiple of the block factor."""


class ImageTooSmall(ImagingError):
    """Input smaller than the 192x144 analysis raster."""


@dataclass(frozen=True)
class HsiPlanes:
    """Per-pixel hue/saturation/intensity planes plus the achromatic mask.

    hue is in degrees [0, 360), saturation and intensity in [0, 1];
    achromatic flags pixels whose hue is numerically meaningless
    (saturation below s_min, or zero intensity).
    """

    hue: np.ndarray
    saturation: np.ndarray
    intensity: np.ndarray
    achromatic: np.ndarray


@dataclass(frozen=True)
class PreprocessResult:
    """Standard analysis raster plus the geometry linking it to the original."""

    image: np.ndarray       # (144, 192, 3) uint8
    offset_x: int           # analyzed-window offset in the original
    offset_y: int
    factor: int             # block-downsample factor

    @property
    def analyzed_box(self) -> tuple[int, int, int, int]:
        """(x, y, w, h) of the analyzed window on the original image."""
        return (
            self.offset_x,
            self.offset_y,
            STANDARD_WIDTH * self.factor,
            STANDARD_HEIGHT * self.factor,
        )


_SIXTEEN_BIT_MODES = {"I", "I;16", "I;16B", "I;16L", "I;16N"}


def decode(data: bytes, format_hint: str | None = None) -> np.ndarray:
    """Decode a PNG or JPEG byte stream into an RGB uint8 raster.

    16-bit and paletted images are normalized to 8-bit RGB. format_hint
    ("png"/"jpeg") is advisory and only used to sharpen error messages.
    """
    if format_hint is not None and format_hint.lower() not in ("png", "jpg", "jpeg"):
        raise UnsupportedFormat(f"unsupported format hint: {format_hint!r}")
    try:
        img = Image.open(io.BytesIO(data))
        fmt = img.format
        if fmt not in ("PNG", "JPEG"):
            raise UnsupportedFormat(f"expected PNG or JPEG, got {fmt}")
        if img.mode in _SIXTEEN_BIT_MODES:
            wide = np.asarray(img, dtype=np.uint32)
            img = Image.fromarray((wide >> 8).astype(np.uint8), mode="L")
        img = img.convert("RGB")
        img.load()
    except UnsupportedFormat:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        hint = f" (hint: {format_hint})" if format_hint else ""
        raise CorruptImage(f"undecodable image bytes{hint}: {exc}") from exc
    arr = np.asarray(img, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise CorruptImage(f"decoded to unusable shape {arr.shape}")
    return arr


def encode_png(img: np.ndarray) -> bytes:
    """Encode an RGB uint8 raster as PNG bytes."""
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def crop_center(img: np.ndarray, target_w: int, target_h: int) -> tuple[np.ndarray, tuple[int, int]]:
    """Return the centered target_w x target_h window and its offset.

    The offset lets annotation draw the analyzed-region box back on the
    original raster.
    """
    h, w = img.shape[:2]
    if target_w > w or target_h > h:
        raise TargetTooLarge(f"crop {target_w}x{target_h} exceeds image {w}x{h}")
    ox = (w - target_w) // 2
    oy = (h - target_h) // 2
    return img[oy:oy + target_h, ox:ox + target_w], (ox, oy)


def downsample_block(img: np.ndarray, factor: int) -> np.ndarray:
    """Shrink by an integer factor; each output pixel is its block's mean.

    Means are rounded half away from zero, computed in exact integer
    arithmetic for cross-platform determinism.
    """
    if factor < 1:
        raise NotDivisible(f"factor must be >= 1, got {factor}")
    h, w = img.shape[:2]
    if h % factor or w % factor:
        raise NotDivisible(f"{w}x{h} not divisible by {factor}")
    if factor == 1:
        return img.copy()
    blocks = img.reshape(h // factor, factor, w // factor, factor, 3)
    sums = blocks.sum(axis=(1, 3), dtype=np.int64)
    n = factor * factor
    return ((2 * sums + n) // (2 * n)).astype(np.uint8)


def preprocess(img: np.ndarray) -> PreprocessResult:
    """Normalize any accepted capture to the standard 192x144 raster.

    Crops the largest centered window of size (192k, 144k) for integer k,
    then block-downsamples by k. For a 640x480 capture this is exactly
    the 576x432 center crop at offset (32, 24) followed by downsampling
    by 3; area averaging stays an exact block mean for every size.
    """
    h, w = img.shape[:2]
    if w < STANDARD_WIDTH or h < STANDARD_HEIGHT:
        raise ImageTooSmall(f"{w}x{h} is below the {STANDARD_WIDTH}x{STANDARD_HEIGHT} minimum")
    k = min(w // STANDARD_WIDTH, h // STANDARD_HEIGHT)
    window, (ox, oy) = crop_center(img, STANDARD_WIDTH * k, STANDARD_HEIGHT * k)
    return PreprocessResult(downsample_block(window, k), ox, oy, k)


def rgb_to_hsi(img: np.ndarray, s_min: float = DEFAULT_S_MIN) -> HsiPlanes:
    """Convert an RGB raster to hue/saturation/intensity planes.

    I = (R+G+B)/765, S = 1 - min/(3I) and hexcone hue in degrees. Pixels
    with S < s_min (or zero intensity) are flagged achromatic so the
    segmentation can park them in a dedicated bin.
    """
    rgb = img.astype(np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    total = r + g + b
    mn = np.minimum(np.minimum(r, g), b)
    mx = np.maximum(np.maximum(r, g), b)

    intensity = total / 765.0
    sat = np.zeros_like(total)
    chromatic_total = total > 0
    np.divide(3.0 * mn, total, out=sat, where=chromatic_total)
    sat = np.where(chromatic_total, 1.0 - sat, 0.0)

    c = mx - mn
    c_safe = np.where(c == 0, 1.0, c)
    hue = np.select(
        [c == 0, mx == r, mx == g],
        [0.0,
         60.0 * (((g - b) / c_safe) % 6.0),
         60.0 * ((b - r) / c_safe + 2.0)],
        default=60.0 * ((r - g) / c_safe + 4.0),
    )
    hue = np.where(hue >= 360.0, hue - 360.0, hue)

    achromatic = (sat < s_min) | (intensity == 0.0)
    return HsiPlanes(hue=hue, saturation=sat, intensity=intensity, achromatic=achromatic)
