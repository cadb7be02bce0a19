/** Thin typed client over the documented /api/v1 endpoints — nothing else. */

import type { DetectTextJson, FeedbackJson, StatsJson, VerdictJson } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = `HTTP ${resp.status}`;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      /* non-JSON error body; keep the status text */
    }
    throw new ApiError(resp.status, detail);
  }
  return resp.json() as Promise<T>;
}

export class ApiClient {
  constructor(private readonly fetchFn: FetchLike = (i, init) => fetch(i, init)) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  detect(urls: string[]): Promise<VerdictJson[]> {
    return this.post("/api/v1/detect", { urls });
  }

  detectText(text: string): Promise<DetectTextJson> {
    return this.post("/api/v1/detect-text", { text });
  }

  result(url: string): Promise<VerdictJson> {
    return this.fetchFn(`/api/v1/result?url=${encodeURIComponent(url)}`).then((r) =>
      asJson<VerdictJson>(r),
    );
  }

  submitFeedback(
    url: string,
    proposedStatus: "benign" | "phishing",
    comment: string,
  ): Promise<FeedbackJson> {
    return this.post("/api/v1/feedback", {
      url,
      proposed_status: proposedStatus,
      comment,
    });
  }

  stats(windowDays: number): Promise<StatsJson> {
    return this.fetchFn(`/api/v1/stats?window_days=${windowDays}`).then((r) =>
      asJson<StatsJson>(r),
    );
  }
}
