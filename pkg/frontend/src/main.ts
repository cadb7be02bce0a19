/** Page wiring: upload-and-detect view, results table with polling,
 * feedback form, and the stats view. */

import { ApiClient, ApiError } from "./api.js";
import { Poller } from "./poller.js";
import { StatsView, WINDOW_CHOICES } from "./stats.js";
import { ResultsTable } from "./table.js";
import { checkFileSize, parseUrlList, UploadError } from "./upload.js";
import { toRow, type ResultRow, type VerdictJson } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

export function setupApp(doc: Document, client = new ApiClient()): void {
  const errorBox = byId<HTMLElement>("error-box");
  const tbody = byId<HTMLTableSectionElement>("results-body");
  const feedbackDialog = byId<HTMLElement>("feedback-form");
  const feedbackUrl = byId<HTMLElement>("feedback-url");
  const feedbackStatus = byId<HTMLSelectElement>("feedback-status");
  const feedbackComment = byId<HTMLTextAreaElement>("feedback-comment");
  const feedbackMessage = byId<HTMLElement>("feedback-message");

  const showError = (text: string) => {
    errorBox.textContent = text;
    errorBox.hidden = text === "";
  };

  const table = new ResultsTable(tbody, (row: ResultRow) => {
    feedbackDialog.hidden = false;
    feedbackUrl.textContent = row.url;
    feedbackMessage.textContent = "";
  });

  const poller = new Poller(client, (verdict: VerdictJson) => {
    table.updateRow(toRow(verdict));
  });

  const showResults = (verdicts: VerdictJson[]) => {
    showError("");
    table.setRows(verdicts.map(toRow));
    for (const v of verdicts) {
      if (v.status === "pending") poller.track(v.url);
    }
  };

  const runDetect = async (urls: string[]) => {
    try {
      showResults(await client.detect(urls));
    } catch (err) {
      showError(err instanceof ApiError ? err.message : `Request failed: ${String(err)}`);
    }
  };

  byId<HTMLInputElement>("file-input").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      checkFileSize(file.size);
    } catch (err) {
      showError((err as Error).message);
      input.value = "";
      return;
    }
    void file.text().then((text) => {
      try {
        void runDetect(parseUrlList(text));
      } catch (err) {
        showError(err instanceof UploadError ? err.message : String(err));
      }
      input.value = "";
    });
  });

  byId<HTMLButtonElement>("detect-text-button").addEventListener("click", () => {
    const text = byId<HTMLTextAreaElement>("text-input").value;
    if (text.trim() === "") {
      showError("Paste some text first.");
      return;
    }
    client
      .detectText(text)
      .then((body) => showResults(body.results))
      .catch((err) => showError(String(err)));
  });

  byId<HTMLButtonElement>("feedback-submit").addEventListener("click", () => {
    const url = feedbackUrl.textContent ?? "";
    const proposed = feedbackStatus.value === "phishing" ? "phishing" : "benign";
    client
      .submitFeedback(url, proposed, feedbackComment.value)
      .then((fb) => {
        feedbackMessage.textContent = `Feedback ${fb.id.slice(0, 8)} submitted for review.`;
        feedbackComment.value = "";
      })
      .catch((err) => {
        feedbackMessage.textContent = String(err);
      });
  });

  byId<HTMLButtonElement>("feedback-close").addEventListener("click", () => {
    feedbackDialog.hidden = true;
  });

  const statsView = new StatsView(client, byId<HTMLElement>("stats-panels"));
  const windowSelect = byId<HTMLSelectElement>("window-select");
  for (const days of WINDOW_CHOICES) {
    const option = doc.createElement("option");
    option.value = String(days);
    option.textContent = `${days} days`;
    if (days === statsView.windowDays) option.selected = true;
    windowSelect.appendChild(option);
  }
  windowSelect.addEventListener("change", () => {
    void statsView.setWindow(Number(windowSelect.value));
  });
  void statsView.refresh();
}

if (typeof document !== "undefined" && document.getElementById("results-body")) {
  setupApp(document);
}
