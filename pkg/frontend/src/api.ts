// Typed client for the phonecam service HTTP API. This is the console's
// only channel to the backend; everything rendered is reconstructible
// from these responses.

export interface Point {
  rank: number;
  x: number;
  y: number;
  x_orig: number;
  y_orig: number;
  score: number;
}

export interface Report {
  job_id: string;
  received_at: string | null;
  completed_at: string | null;
  original: { width: number; height: number };
  crop_offset: { x: number; y: number };
  analyzed_box: { x: number; y: number; w: number; h: number };
  points: Point[];
  segment_counts: { hue: number; saturation: number; intensity: number };
  duration_s: number;
}

export interface ResultLinks {
  annotated: string;
  processed: string;
  report: string;
}

export interface JobView {
  job_id: string;
  status: "queued" | "processing" | "done" | "failed";
  source: string;
  filename: string;
  capture_time: string | null;
  received_at: string;
  completed_at: string | null;
  duration_s: number | null;
  distance_m: number | null;
  notes: string | null;
  error: string | null;
  results: ResultLinks | null;
}

export interface UploadFields {
  captureTime?: string;
  distanceM?: number;
  notes?: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function errorDetail(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: string };
    return body.detail ?? resp.statusText;
  } catch {
    return resp.statusText;
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.url(path));
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorDetail(resp));
    }
    return (await resp.json()) as T;
  }

  async uploadImage(file: Blob, filename: string, fields: UploadFields = {}): Promise<{ job_id: string }> {
    const form = new FormData();
    form.append("image", file, filename);
    if (fields.captureTime) form.append("capture_time", fields.captureTime);
    if (fields.distanceM !== undefined) form.append("distance_m", String(fields.distanceM));
    if (fields.notes) form.append("notes", fields.notes);
    const resp = await this.fetchFn(this.url("/api/v1/images"), { method: "POST", body: form });
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorDetail(resp));
    }
    return (await resp.json()) as { job_id: string };
  }

  getJob(jobId: string): Promise<JobView> {
    return this.getJson(`/api/v1/jobs/${jobId}`);
  }

  getMission(): Promise<{ entries: JobView[] }> {
    return this.getJson("/api/v1/mission");
  }

  getReport(jobId: string): Promise<Report> {
    return this.getJson(`/results/${jobId}/report.json`);
  }

  async updateMetadata(jobId: string, meta: { distance_m?: number; notes?: string }): Promise<JobView> {
    const resp = await this.fetchFn(this.url(`/api/v1/jobs/${jobId}/metadata`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(meta),
    });
    if (!resp.ok) {
      throw new ApiError(resp.status, await errorDetail(resp));
    }
    return (await resp.json()) as JobView;
  }

  health(): Promise<{ status: string; prefix: string }> {
    return this.getJson("/api/v1/health");
  }

  resultUrl(jobId: string, artifact: "annotated.png" | "processed.png" | "report.json"): string {
    return this.url(`/results/${jobId}/${artifact}`);
  }
}
