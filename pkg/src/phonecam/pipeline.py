"""The full analysis pipeline, shared by the CLI and the service.

decode -> preprocess -> HSI -> per-channel (quantize, label, uncommon)
-> fuse -> extract points -> annotate. Given the same bytes and config
this is fully deterministic, down to the published PNG bytes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import imaging, saliency, segmentation
from .annotate import annotate
from .config import PipelineConfig
from .saliency import InterestPoint


@dataclass(frozen=True)
class Analysis:
    """Everything one analyzed capture produces."""

    points: list[InterestPoint]
    crop_offset: tuple[int, int]
    analyzed_box: tuple[int, int, int, int]
    original_size: tuple[int, int]          # (w, h)
    segment_counts: dict[str, int]
    annotated_raw: bytes
    annotated_processed: bytes
    duration_s: float


def analyze_array(raw: np.ndarray, cfg: PipelineConfig | None = None) -> Analysis:
    """Run the vision pipeline on a decoded RGB raster."""
    cfg = cfg or PipelineConfig()
    started = time.monotonic()

    pre = imaging.preprocess(raw)
    hsi = imaging.rgb_to_hsi(pre.image, s_min=cfg.s_min)

    planes = {
        "hue": segmentation.quantize(
            hsi.hue, cfg.bin_count, circular=True, achromatic_mask=hsi.achromatic
        ),
        "saturation": segmentation.quantize(hsi.saturation, cfg.bin_count),
        "intensity": segmentation.quantize(hsi.intensity, cfg.bin_count),
    }
    maps = {}
    counts = {}
    for name, plane in planes.items():
        sm = segmentation.connected_components(plane)
        maps[name] = saliency.uncommon_map(sm)
        counts[name] = sm.segment_count

    interest = saliency.fuse(maps["hue"], maps["saturation"], maps["intensity"])
    points = saliency.extract_points(
        interest,
        k=cfg.k,
        smooth_radius=cfg.smooth_radius,
        suppress_radius=cfg.suppress_radius,
        crop_offset=(pre.offset_x, pre.offset_y),
        factor=pre.factor,
    )

    annotated_raw, annotated_processed = annotate(
        raw,
        pre.image,
        points,
        pre.analyzed_box,
        box_color=cfg.box_color,
        marker_color=cfg.marker_color,
    )

    h, w = raw.shape[:2]
    return Analysis(
        points=points,
        crop_offset=(pre.offset_x, pre.offset_y),
        analyzed_box=pre.analyzed_box,
        original_size=(w, h),
        segment_counts=counts,
        annotated_raw=annotated_raw,
        annotated_processed=annotated_processed,
        duration_s=time.monotonic() - started,
    )


def analyze_bytes(data: bytes, cfg: PipelineConfig | None = None) -> Analysis:
    """Decode image bytes and run the vision pipeline."""
    return analyze_array(imaging.decode(data), cfg)


def report_dict(
    analysis: Analysis,
    job_id: str,
    received_at: str | None = None,
    completed_at: str | None = None,
) -> dict:
    """Build the report.json payload for one analysis."""
    ox, oy = analysis.crop_offset
    bx, by, bw, bh = analysis.analyzed_box
    w, h = analysis.original_size
    return {
        "job_id": job_id,
        "received_at": received_at,
        "completed_at": completed_at,
        "original": {"width": w, "height": h},
        "crop_offset": {"x": ox, "y": oy},
        "analyzed_box": {"x": bx, "y": by, "w": bw, "h": bh},
        "points": [
            {
                "rank": p.rank,
                "x": p.x,
                "y": p.y,
                "x_orig": p.x_orig,
                "y_orig": p.y_orig,
                "score": p.score,
            }
            for p in analysis.points
        ],
        "segment_counts": dict(analysis.segment_counts),
        "duration_s": analysis.duration_s,
    }
