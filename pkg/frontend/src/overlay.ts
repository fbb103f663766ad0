// Geometry for drawing clickable point markers over the result images.
// The processed view positions markers by analysis-frame coordinates,
// the original view by the mapped-back coordinates; both are scaled to
// whatever size the image is displayed at.

import type { Point, Report } from "./api.js";

export type ViewMode = "processed" | "original";

export interface MarkerPlacement {
  rank: number;
  leftPct: number; // percentage of displayed width
  topPct: number;
}

export function naturalSize(report: Report, mode: ViewMode): { width: number; height: number } {
  if (mode === "original") {
    return { width: report.original.width, height: report.original.height };
  }
  return { width: 192, height: 144 };
}

export function placeMarker(point: Point, report: Report, mode: ViewMode): MarkerPlacement {
  const size = naturalSize(report, mode);
  const x = mode === "original" ? point.x_orig : point.x;
  const y = mode === "original" ? point.y_orig : point.y;
  return {
    rank: point.rank,
    leftPct: (100 * (x + 0.5)) / size.width,
    topPct: (100 * (y + 0.5)) / size.height,
  };
}

export function placeMarkers(report: Report, mode: ViewMode): MarkerPlacement[] {
  return report.points.map((p) => placeMarker(p, report, mode));
}

export function markerTooltip(point: Point): string {
  return (
    `rank ${point.rank} · score ${point.score.toFixed(4)}\n` +
    `analysis frame (${point.x}, ${point.y})\n` +
    `original frame (${point.x_orig}, ${point.y_orig})`
  );
}
