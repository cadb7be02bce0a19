/** Status polling for pending rows.
 *
 * Every pending URL is re-queried via GET /result on a shared 2 s tick
 * until it reaches a terminal status; at most 10 result requests are in
 * flight at once, and the tick timer is released as soon as nothing is
 * pending (no leaked timers).
 */

import type { ApiClient } from "./api.js";
import { TERMINAL_STATUSES, type VerdictJson } from "./types.js";

export const POLL_INTERVAL_MS = 2000;
export const MAX_CONCURRENT_POLLS = 10;

export type RowUpdate = (verdict: VerdictJson) => void;

export class Poller {
  private readonly pending = new Set<string>();
  private inFlight = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly client: ApiClient,
    private readonly onUpdate: RowUpdate,
    private readonly intervalMs: number = POLL_INTERVAL_MS,
    private readonly maxConcurrent: number = MAX_CONCURRENT_POLLS,
  ) {}

  /** Start (or keep) polling a URL until its status turns terminal. */
  track(url: string): void {
    this.pending.add(url);
    this.schedule();
  }

  get pendingCount(): number {
    return this.pending.size;
  }

  get inFlightCount(): number {
    return this.inFlight;
  }

  get active(): boolean {
    return this.timer !== null || this.inFlight > 0;
  }

  stop(): void {
    this.cancelTimer();
    this.pending.clear();
  }

  private cancelTimer(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private schedule(): void {
    if (this.timer !== null || this.pending.size === 0) return;
    this.timer = setTimeout(() => {
      this.timer = null;
      this.tick();
    }, this.intervalMs);
  }

  private tick(): void {
    const budget = this.maxConcurrent - this.inFlight;
    const batch = [...this.pending].slice(0, Math.max(budget, 0));
    for (const url of batch) {
      this.inFlight += 1;
      this.client
        .result(url)
        .then((verdict) => {
          if (TERMINAL_STATUSES.has(verdict.status)) {
            this.pending.delete(url);
            if (this.pending.size === 0) this.cancelTimer();
            this.onUpdate(verdict);
          }
        })
        .catch(() => {
          /* transient fetch failure: row stays pending, retried next tick */
        })
        .finally(() => {
          this.inFlight -= 1;
          this.schedule();
        });
    }
    this.schedule();
  }
}
