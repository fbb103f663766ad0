"""Renders the marked-up result images.

Two outputs per analysis: the original with the analyzed region drawn as
a red box, and the 192x144 raster with the interest points drawn as
purple discs (radius 3) ringed in white.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image, ImageDraw

from .saliency import InterestPoint

BOX_COLOR = (255, 0, 0)
MARKER_COLOR = (160, 32, 240)
MARKER_RADIUS = 3
_BOX_WIDTH = 2


def _to_png(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def annotate(
    raw: np.ndarray,
    processed: np.ndarray,
    points: list[InterestPoint],
    analyzed_box: tuple[int, int, int, int],
    box_color: tuple[int, int, int] = BOX_COLOR,
    marker_color: tuple[int, int, int] = MARKER_COLOR,
) -> tuple[bytes, bytes]:
    """Return (annotated original, annotated processed) as PNG bytes."""
    x, y, w, h = analyzed_box
    original = Image.fromarray(raw, mode="RGB")
    draw = ImageDraw.Draw(original)
    draw.rectangle([x, y, x + w - 1, y + h - 1], outline=box_color, width=_BOX_WIDTH)

    marked = Image.fromarray(processed, mode="RGB")
    draw = ImageDraw.Draw(marked)
    r = MARKER_RADIUS
    for p in points:
        # white ring one pixel outside the filled disc
        draw.ellipse([p.x - r - 1, p.y - r - 1, p.x + r + 1, p.y + r + 1], fill=(255, 255, 255))
        draw.ellipse([p.x - r, p.y - r, p.x + r, p.y + r], fill=marker_color)

    return _to_png(original), _to_png(marked)
