/** JSON shapes of the service API, mirrored verbatim. */

export type Status = "benign" | "phishing" | "pending" | "error" | "unknown";

export interface VerdictJson {
  url: string;
  status: Status;
  source?: string;
  target_brand?: string | null;
  decided_at?: string;
  detail?: string | null;
}

export interface DetectTextJson {
  extracted_urls: string[];
  results: VerdictJson[];
}

export interface FeedbackJson {
  id: string;
  url: string;
  proposed_status: string;
  state: string;
}

export interface StatsJson {
  unique_phishing_count: number;
  per_brand_counts: { brand: string; count: number }[];
  per_day_phishing_counts: Record<string, number>;
  source_distribution: Record<string, number>;
}

/** A row in the results table; pending rows auto-refresh until terminal. */
export interface ResultRow {
  url: string;
  status: Status;
  source: string;
  targetBrand: string;
  decidedAt: string;
}

export const TERMINAL_STATUSES: ReadonlySet<Status> = new Set([
  "benign",
  "phishing",
  "error",
  "unknown",
]);

export function toRow(v: VerdictJson): ResultRow {
  return {
    url: v.url,
    status: v.status,
    source: v.source ?? "",
    targetBrand: v.target_brand ?? "",
    decidedAt: v.decided_at ?? "",
  };
}
