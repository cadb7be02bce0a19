/** Results table: order-preserving rows with status badges; clicking a
 * row opens the feedback form for that URL. */

import type { ResultRow, Status } from "./types.js";

const BADGE_LABELS: Record<Status, string> = {
  benign: "Benign",
  phishing: "Phishing",
  pending: "In Queue",
  error: "Error",
  unknown: "Unknown",
};

export function badgeFor(status: Status): HTMLSpanElement {
  const span = document.createElement("span");
  span.className = `badge badge-${status}`;
  span.textContent = BADGE_LABELS[status];
  return span;
}

export class ResultsTable {
  private readonly rows = new Map<string, ResultRow>();
  private readonly order: string[] = [];

  constructor(
    private readonly tbody: HTMLTableSectionElement,
    private readonly onRowClick: (row: ResultRow) => void,
  ) {}

  setRows(rows: ResultRow[]): void {
    this.rows.clear();
    this.order.length = 0;
    for (const row of rows) {
      if (!this.rows.has(row.url)) this.order.push(row.url);
      this.rows.set(row.url, row);
    }
    this.render();
  }

  updateRow(row: ResultRow): void {
    if (!this.rows.has(row.url)) return;
    this.rows.set(row.url, row);
    this.render();
  }

  get size(): number {
    return this.order.length;
  }

  statusOf(url: string): Status | undefined {
    return this.rows.get(url)?.status;
  }

  private render(): void {
    this.tbody.replaceChildren();
    for (const url of this.order) {
      const row = this.rows.get(url);
      if (!row) continue;
      const tr = document.createElement("tr");
      tr.dataset.url = row.url;
      tr.addEventListener("click", () => this.onRowClick(row));

      const urlCell = document.createElement("td");
      urlCell.className = "cell-url";
      urlCell.textContent = row.url;

      const statusCell = document.createElement("td");
      statusCell.appendChild(badgeFor(row.status));

      const sourceCell = document.createElement("td");
      sourceCell.textContent = row.source;

      const brandCell = document.createElement("td");
      brandCell.textContent = row.targetBrand;

      const whenCell = document.createElement("td");
      whenCell.textContent = row.decidedAt ? row.decidedAt.slice(0, 19) : "";

      tr.append(urlCell, statusCell, sourceCell, brandCell, whenCell);
      this.tbody.appendChild(tr);
    }
  }
}
