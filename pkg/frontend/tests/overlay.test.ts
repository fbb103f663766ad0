import { describe, expect, it } from "vitest";

import type { Report } from "../src/api.js";
import { markerTooltip, naturalSize, placeMarker, placeMarkers } from "../src/overlay.js";

const report: Report = {
  job_id: "j",
  received_at: null,
  completed_at: null,
  original: { width: 640, height: 480 },
  crop_offset: { x: 32, y: 24 },
  analyzed_box: { x: 32, y: 24, w: 576, h: 432 },
  points: [
    { rank: 1, x: 96, y: 72, x_orig: 321, y_orig: 241, score: 2.5 },
    { rank: 2, x: 0, y: 0, x_orig: 33, y_orig: 25, score: 1.25 },
    { rank: 3, x: 191, y: 143, x_orig: 606, y_orig: 454, score: 0.75 },
  ],
  segment_counts: { hue: 10, saturation: 8, intensity: 6 },
  duration_s: 0.1,
};

describe("naturalSize", () => {
  it("is the analysis raster for the processed view", () => {
    expect(naturalSize(report, "processed")).toEqual({ width: 192, height: 144 });
  });

  it("is the capture size for the original view", () => {
    expect(naturalSize(report, "original")).toEqual({ width: 640, height: 480 });
  });
});

describe("placeMarker", () => {
  it("centers the rank-1 marker mid-image in the processed view", () => {
    const m = placeMarker(report.points[0]!, report, "processed");
    expect(m.leftPct).toBeCloseTo((100 * 96.5) / 192, 6);
    expect(m.topPct).toBeCloseTo((100 * 72.5) / 144, 6);
  });

  it("uses mapped-back coordinates in the original view", () => {
    const m = placeMarker(report.points[0]!, report, "original");
    expect(m.leftPct).toBeCloseTo((100 * 321.5) / 640, 6);
    expect(m.topPct).toBeCloseTo((100 * 241.5) / 480, 6);
  });

  it("keeps every marker inside the image box", () => {
    for (const mode of ["processed", "original"] as const) {
      for (const m of placeMarkers(report, mode)) {
        expect(m.leftPct).toBeGreaterThan(0);
        expect(m.leftPct).toBeLessThan(100);
        expect(m.topPct).toBeGreaterThan(0);
        expect(m.topPct).toBeLessThan(100);
      }
    }
  });

  it("preserves rank order", () => {
    expect(placeMarkers(report, "processed").map((m) => m.rank)).toEqual([1, 2, 3]);
  });
});

describe("markerTooltip", () => {
  it("shows rank, score and both coordinate frames", () => {
    const text = markerTooltip(report.points[1]!);
    expect(text).toContain("rank 2");
    expect(text).toContain("score 1.2500");
    expect(text).toContain("(0, 0)");
    expect(text).toContain("(33, 25)");
  });
});
