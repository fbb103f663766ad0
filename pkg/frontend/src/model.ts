// Client-side session state: one card per capture, ordered like the
// mission log, each card reflecting its latest poll. Pure functions so
// the state machine is testable without a DOM.

import type { JobView, Report } from "./api.js";

export type CardStatus = "queued" | "processing" | "done" | "failed" | "unreachable";

export interface JobCard {
  jobId: string | null; // null until the server accepted the upload
  localId: string;
  filename: string;
  status: CardStatus;
  captureTime: string | null;
  receivedAt: string | null;
  completedAt: string | null;
  distanceM: number | null;
  notes: string | null;
  error: string | null;
  report: Report | null;
}

let localCounter = 0;

export function newLocalCard(filename: string, captureTime?: string, distanceM?: number, notes?: string): JobCard {
  localCounter += 1;
  return {
    jobId: null,
    localId: `local-${localCounter}`,
    filename,
    status: "queued",
    captureTime: captureTime ?? null,
    receivedAt: null,
    completedAt: null,
    distanceM: distanceM ?? null,
    notes: notes ?? null,
    error: null,
    report: null,
  };
}

export function validateFilename(name: string, prefix: string): string | null {
  if (!name) {
    return "choose an image first";
  }
  if (!name.startsWith(prefix)) {
    return `filename must start with "${prefix}" (got "${name}")`;
  }
  return null;
}

// Inline message for an upload rejection, keyed by the documented codes.
export function uploadErrorMessage(status: number, detail: string): string {
  switch (status) {
    case 422:
      return `rejected: ${detail}`;
    case 400:
      return "no image attached to the request";
    case 413:
      return "image too large (16 MiB limit)";
    default:
      return `upload failed (HTTP ${status}): ${detail}`;
  }
}

export function applyJobView(card: JobCard, view: JobView): JobCard {
  return {
    ...card,
    jobId: view.job_id,
    filename: view.filename,
    status: view.status,
    captureTime: view.capture_time,
    receivedAt: view.received_at,
    completedAt: view.completed_at,
    distanceM: view.distance_m,
    notes: view.notes,
    error: view.error,
  };
}

export function markUnreachable(card: JobCard): JobCard {
  return { ...card, status: "unreachable", error: "server unreachable" };
}

/**
 * Reconcile local cards with the mission log: mission order wins, cards
 * the server does not know yet (still uploading, or unreachable) stay at
 * the end in creation order.
 */
export function mergeMission(cards: JobCard[], entries: JobView[]): JobCard[] {
  const byJobId = new Map<string, JobCard>();
  for (const card of cards) {
    if (card.jobId) byJobId.set(card.jobId, card);
  }
  const merged: JobCard[] = entries.map((entry) => {
    const existing = byJobId.get(entry.job_id);
    const base = existing ?? newLocalCard(entry.filename);
    return applyJobView(base, entry);
  });
  const known = new Set(entries.map((e) => e.job_id));
  for (const card of cards) {
    if (!card.jobId || !known.has(card.jobId)) {
      merged.push(card);
    }
  }
  return merged;
}

export function isSettled(card: JobCard): boolean {
  return card.status === "done" || card.status === "failed";
}

// Timeline row data straight off a card; null-safe for in-flight jobs.
export interface TimelineRow {
  filename: string;
  captureTime: string;
  receivedAt: string;
  completedAt: string;
  status: CardStatus;
  distanceM: string;
  notes: string;
}

function clock(iso: string | null): string {
  if (!iso) return "—";
  const t = iso.indexOf("T");
  return t >= 0 ? iso.slice(t + 1, t + 9) : iso;
}

export function timelineRow(card: JobCard): TimelineRow {
  return {
    filename: card.filename,
    captureTime: card.captureTime ?? "—",
    receivedAt: clock(card.receivedAt),
    completedAt: clock(card.completedAt),
    status: card.status,
    distanceM: card.distanceM === null ? "—" : card.distanceM.toFixed(1),
    notes: card.notes ?? "",
  };
}
