// Mission console: upload captures, watch their cards settle, inspect
// the three returned points, keep the operator's notes, and review the
// timeline. Plain DOM, no framework; the service is its single source
// of truth.

import { ApiClient, ApiError, type JobView, type Report } from "./api.js";
import {
  applyJobView,
  isSettled,
  markUnreachable,
  mergeMission,
  newLocalCard,
  timelineRow,
  uploadErrorMessage,
  validateFilename,
  type JobCard,
} from "./model.js";
import { markerTooltip, placeMarkers, type ViewMode } from "./overlay.js";

const POLL_MS = 2000;
const MISSION_REFRESH_MS = 5000;

const api = new ApiClient("");
let prefix = "astro_";
let cards: JobCard[] = [];
let viewerJobId: string | null = null;
let viewerMode: ViewMode = "processed";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const form = $<HTMLFormElement>("upload-form");
const fileInput = $<HTMLInputElement>("file-input");
const captureInput = $<HTMLInputElement>("capture-time");
const distanceInput = $<HTMLInputElement>("distance");
const notesInput = $<HTMLInputElement>("notes");
const uploadError = $<HTMLElement>("upload-error");
const cardsEl = $<HTMLElement>("cards");
const timelineBody = $<HTMLElement>("timeline-body");
const viewerEl = $<HTMLElement>("viewer");

function findCard(localId: string): JobCard | undefined {
  return cards.find((c) => c.localId === localId);
}

function replaceCard(updated: JobCard): void {
  cards = cards.map((c) => (c.localId === updated.localId ? updated : c));
  render();
}

// -- upload -----------------------------------------------------------------

form.addEventListener("submit", (event) => {
  event.preventDefault();
  uploadError.textContent = "";
  const file = fileInput.files?.[0];
  const problem = validateFilename(file?.name ?? "", prefix);
  if (!file || problem) {
    uploadError.textContent = problem ?? "choose an image first";
    return;
  }
  const card = newLocalCard(
    file.name,
    captureInput.value || undefined,
    distanceInput.value ? Number(distanceInput.value) : undefined,
    notesInput.value || undefined,
  );
  cards = [...cards, card];
  render();
  void submitCard(card, file);
  form.reset();
});

async function submitCard(card: JobCard, file: Blob): Promise<void> {
  try {
    const { job_id } = await api.uploadImage(file, card.filename, {
      captureTime: card.captureTime ?? undefined,
      distanceM: card.distanceM ?? undefined,
      notes: card.notes ?? undefined,
    });
    replaceCard({ ...card, jobId: job_id });
    pollUntilSettled(job_id, card.localId);
  } catch (err) {
    if (err instanceof ApiError) {
      uploadError.textContent = uploadErrorMessage(err.status, err.detail);
      cards = cards.filter((c) => c.localId !== card.localId);
      render();
    } else {
      const stale = findCard(card.localId);
      if (stale) replaceCard(markUnreachable(stale));
    }
  }
}

function pollUntilSettled(jobId: string, localId: string): void {
  const timer = setInterval(async () => {
    try {
      const view = await api.getJob(jobId);
      const card = findCard(localId);
      if (!card) {
        clearInterval(timer);
        return;
      }
      let updated = applyJobView(card, view);
      if (view.status === "done") {
        const report = await fetchReportWithRetry(jobId);
        if (report === null) return; // still publishing, poll again
        updated = { ...updated, report };
      }
      replaceCard(updated);
      if (isSettled(updated)) clearInterval(timer);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return; // transient
      const card = findCard(localId);
      if (card && !(err instanceof ApiError)) replaceCard(markUnreachable(card));
    }
  }, POLL_MS);
}

async function fetchReportWithRetry(jobId: string): Promise<Report | null> {
  try {
    return await api.getReport(jobId);
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) return null;
    throw err;
  }
}

// -- cards ------------------------------------------------------------------

function render(): void {
  cardsEl.replaceChildren(...cards.map(cardElement));
  timelineBody.replaceChildren(...cards.map(timelineRowElement));
  renderViewer();
}

function cardElement(card: JobCard): HTMLElement {
  const el = document.createElement("article");
  el.className = `card status-${card.status}`;

  const title = document.createElement("h3");
  title.textContent = card.filename;
  const badge = document.createElement("span");
  badge.className = "badge";
  badge.textContent = card.status;
  title.appendChild(badge);
  el.appendChild(title);

  if (card.status === "done" && card.jobId) {
    const thumb = document.createElement("img");
    thumb.className = "thumb";
    thumb.src = api.resultUrl(card.jobId, "processed.png");
    thumb.alt = `processed ${card.filename}`;
    el.appendChild(thumb);
    const view = document.createElement("button");
    view.textContent = "view points";
    view.addEventListener("click", () => {
      viewerJobId = card.jobId;
      viewerMode = "processed";
      render();
    });
    el.appendChild(view);
  } else if (card.status === "failed") {
    const err = document.createElement("p");
    err.className = "error-panel";
    err.textContent = card.error ?? "analysis failed";
    el.appendChild(err);
  } else if (card.status === "unreachable") {
    const retry = document.createElement("button");
    retry.textContent = "retry";
    retry.addEventListener("click", () => location.reload());
    el.appendChild(retry);
  }

  const noteRow = document.createElement("div");
  noteRow.className = "note-row";
  const noteInput = document.createElement("input");
  noteInput.value = card.notes ?? "";
  noteInput.placeholder = "operator notes";
  const save = document.createElement("button");
  save.textContent = "save";
  save.addEventListener("click", async () => {
    if (!card.jobId) return;
    const view = await api.updateMetadata(card.jobId, { notes: noteInput.value });
    replaceCard(applyJobView(card, view));
  });
  noteRow.append(noteInput, save);
  el.appendChild(noteRow);
  return el;
}

function timelineRowElement(card: JobCard): HTMLElement {
  const row = timelineRow(card);
  const tr = document.createElement("tr");
  for (const cell of [row.filename, row.captureTime, row.receivedAt,
                      row.completedAt, row.status, row.distanceM, row.notes]) {
    const td = document.createElement("td");
    td.textContent = cell;
    tr.appendChild(td);
  }
  return tr;
}

// -- result viewer -----------------------------------------------------------

function renderViewer(): void {
  viewerEl.replaceChildren();
  if (!viewerJobId) return;
  const card = cards.find((c) => c.jobId === viewerJobId);
  if (!card?.report) return;
  const report = card.report;

  const bar = document.createElement("div");
  bar.className = "viewer-bar";
  const toggle = document.createElement("button");
  toggle.textContent = viewerMode === "processed" ? "show original (red box)" : "show processed";
  toggle.addEventListener("click", () => {
    viewerMode = viewerMode === "processed" ? "original" : "processed";
    render();
  });
  const close = document.createElement("button");
  close.textContent = "close";
  close.addEventListener("click", () => {
    viewerJobId = null;
    render();
  });
  bar.append(toggle, close);
  viewerEl.appendChild(bar);

  const stage = document.createElement("div");
  stage.className = "stage";
  const img = document.createElement("img");
  img.src = api.resultUrl(
    report.job_id,
    viewerMode === "processed" ? "processed.png" : "annotated.png",
  );
  img.alt = `${viewerMode} view of ${card.filename}`;
  stage.appendChild(img);

  for (const [i, placement] of placeMarkers(report, viewerMode).entries()) {
    const marker = document.createElement("button");
    marker.className = "marker";
    marker.style.left = `${placement.leftPct}%`;
    marker.style.top = `${placement.topPct}%`;
    marker.textContent = String(placement.rank);
    const point = report.points[i];
    if (point) {
      marker.title = markerTooltip(point);
      marker.addEventListener("click", () => {
        $<HTMLElement>("point-detail").textContent = markerTooltip(point).replace(/\n/g, " · ");
      });
    }
    stage.appendChild(marker);
  }
  viewerEl.appendChild(stage);

  const detail = document.createElement("p");
  detail.id = "point-detail";
  detail.className = "point-detail";
  detail.textContent = "click a marker for details";
  viewerEl.appendChild(detail);
}

// -- mission timeline --------------------------------------------------------

async function refreshMission(): Promise<void> {
  try {
    const { entries } = await api.getMission();
    cards = mergeMission(cards, entries);
    await attachMissingReports(entries);
    render();
  } catch {
    // unreachable server: cards keep their last state; uploads will surface it
  }
}

async function attachMissingReports(entries: JobView[]): Promise<void> {
  for (const entry of entries) {
    if (entry.status !== "done") continue;
    const card = cards.find((c) => c.jobId === entry.job_id);
    if (!card || card.report) continue;
    const report = await fetchReportWithRetry(entry.job_id);
    if (report) {
      cards = cards.map((c) => (c.jobId === entry.job_id ? { ...c, report } : c));
    }
  }
}

async function init(): Promise<void> {
  try {
    const health = await api.health();
    prefix = health.prefix;
    $<HTMLElement>("prefix-hint").textContent = `filenames must start with "${prefix}"`;
  } catch {
    $<HTMLElement>("prefix-hint").textContent = "service unreachable — uploads will retry";
  }
  await refreshMission();
  setInterval(refreshMission, MISSION_REFRESH_MS);
}

void init();
