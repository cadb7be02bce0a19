/** Stats view: four panels fed by GET /stats with a window selector. */

import type { ApiClient } from "./api.js";
import { barChart, donutChart, timeSeriesChart } from "./charts.js";
import type { StatsJson } from "./types.js";

export const WINDOW_CHOICES = [7, 30, 90] as const;
const TOP_BRANDS = 10;

export class StatsView {
  windowDays = 30;

  constructor(
    private readonly client: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  async refresh(): Promise<void> {
    let stats: StatsJson;
    try {
      stats = await this.client.stats(this.windowDays);
    } catch (err) {
      this.root.replaceChildren(
        this.panel("Statistics", this.message(`Could not load stats: ${String(err)}`)),
      );
      return;
    }
    this.render(stats);
  }

  setWindow(days: number): Promise<void> {
    this.windowDays = days;
    return this.refresh();
  }

  render(stats: StatsJson): void {
    this.root.replaceChildren(
      this.countPanel(stats),
      this.dailyPanel(stats),
      this.brandsPanel(stats),
      this.sourcesPanel(stats),
    );
  }

  private panel(title: string, body: HTMLElement): HTMLElement {
    const section = document.createElement("section");
    section.className = "panel";
    const h = document.createElement("h3");
    h.textContent = title;
    section.append(h, body);
    return section;
  }

  private message(text: string): HTMLElement {
    const p = document.createElement("p");
    p.className = "empty-state";
    p.textContent = text;
    return p;
  }

  private countPanel(stats: StatsJson): HTMLElement {
    const div = document.createElement("div");
    div.className = "big-number";
    div.textContent = String(stats.unique_phishing_count);
    return this.panel(`Unique phishing URLs (${this.windowDays} d)`, div);
  }

  private dailyPanel(stats: StatsJson): HTMLElement {
    const days = Object.keys(stats.per_day_phishing_counts);
    const body =
      days.length === 0
        ? this.message("No detections in this window.")
        : (timeSeriesChart(stats.per_day_phishing_counts) as unknown as HTMLElement);
    return this.panel("Daily phishing detections", body);
  }

  private brandsPanel(stats: StatsJson): HTMLElement {
    const top = stats.per_brand_counts.slice(0, TOP_BRANDS);
    const body =
      top.length === 0
        ? this.message("No targeted brands yet.")
        : (barChart(
            top.map((b) => ({ label: b.brand, value: b.count })),
          ) as unknown as HTMLElement);
    return this.panel("Most targeted brands", body);
  }

  private sourcesPanel(stats: StatsJson): HTMLElement {
    const entries = Object.entries(stats.source_distribution);
    const body =
      entries.length === 0
        ? this.message("No verdicts yet.")
        : (donutChart(stats.source_distribution) as unknown as HTMLElement);
    return this.panel("Verdict sources", body);
  }
}
