/** Browser wiring: renders the wizard from WorkflowState, drives the API
 * client, and keeps the chart, summary panel, and model overlays in sync. */

import { ApiClient, ApiError, defaultWindow } from "./api.js";
import { buildChart, nearestHotspot, zoomWindow, type ChartModel, type ModelOverlay } from "./chart.js";
import { chartImageUrl, seriesToCsv } from "./export.js";
import {
  diagnosticsHtml,
  lossesHtml,
  overlayFromEstimate,
  parameterTableHtml,
  seriesLines,
  summaryHtml,
} from "./overlay.js";
import { WorkflowState } from "./state.js";
import { MEASURE_NAMES } from "./measures.js";
import type { Catalogue, EstimateResponse, SeriesResponse } from "./types.js";
import { MODEL_FAMILIES, MODEL_LABELS, type AssetClassKey } from "./types.js";

const CLASS_LABELS: Record<AssetClassKey, string> = {
  stocks: "Stocks",
  exchange_rates: "Exchange Rates",
  futures: "Futures",
};

export class App {
  state = new WorkflowState();
  private catalogue: Catalogue | null = null;
  private series: SeriesResponse | null = null;
  private overlays: ModelOverlay[] = [];
  private estimates = new Map<string, EstimateResponse>();
  private chart: ChartModel | null = null;
  private zoom: { start: number; end: number } | undefined;

  constructor(
    private root: Document,
    private api: ApiClient,
  ) {}

  async start(): Promise<void> {
    this.catalogue = await this.api.getCatalogue();
    this.renderWizard();
  }

  private el<T extends HTMLElement>(sel: string): T {
    const node = this.root.querySelector<T>(sel);
    if (!node) throw new Error(`missing element ${sel}`);
    return node;
  }

  private renderWizard(): void {
    const host = this.el<HTMLElement>("#wizard");
    const s = this.state;
    const crumbs = ["class", "symbol", "range", "measure", "results"]
      .map((step) => `<span class="crumb ${s.step === step ? "active" : ""}">${step}</span>`)
      .join(" › ");
    let body = "";
    if (s.step === "class") {
      body = (Object.keys(CLASS_LABELS) as AssetClassKey[])
        .map((k) => `<button class="choice" data-class="${k}">${CLASS_LABELS[k]}</button>`)
        .join("");
    } else if (s.step === "symbol") {
      const entries = this.catalogue?.[s.selections.assetClass!] ?? [];
      body =
        `<input id="symbol-search" placeholder="search symbol"/>` +
        `<div class="symbol-list">` +
        entries
          .map(
            (e) =>
              `<button class="choice" data-symbol="${e.symbol}">` +
              `<b>${e.symbol}</b> ${e.name}${e.sector ? ` · ${e.sector}` : ""}` +
              `<small>${e.first_stored ?? e.first_date ?? ""} → ${e.last_stored ?? ""}</small></button>`,
          )
          .join("") +
        `</div>`;
    } else if (s.step === "range") {
      const dflt = defaultWindow();
      body =
        `<label>from <input type="date" id="range-from" value="${dflt.from}"/></label>` +
        `<label>to <input type="date" id="range-to" value="${dflt.to}"/></label>` +
        `<button id="range-apply" class="choice">apply</button>`;
    } else if (s.step === "measure") {
      body =
        MEASURE_NAMES.map(
          (m) =>
            `<label class="measure-pick"><input type="checkbox" data-measure="${m}" ` +
            `${s.selections.measures.includes(m) ? "checked" : ""}/>${m}</label>`,
        ).join("") + `<button id="to-results" class="choice">view results</button>`;
    }
    host.innerHTML = `<nav class="crumbs">${crumbs}</nav><div class="step-body">${body}</div>`;
    this.bindWizard();
    this.el<HTMLElement>("#results").style.display = s.step === "results" ? "block" : "none";
    if (s.step === "results") void this.refreshResults();
  }

  private bindWizard(): void {
    this.root.querySelectorAll<HTMLButtonElement>("[data-class]").forEach((b) =>
      b.addEventListener("click", () => {
        this.state.chooseClass(b.dataset.class as AssetClassKey);
        this.renderWizard();
      }),
    );
    this.root.querySelectorAll<HTMLButtonElement>("[data-symbol]").forEach((b) =>
      b.addEventListener("click", () => {
        this.state.chooseSymbol(b.dataset.symbol!);
        this.renderWizard();
      }),
    );
    const search = this.root.querySelector<HTMLInputElement>("#symbol-search");
    search?.addEventListener("input", () => {
      const q = search.value.toUpperCase();
      this.root.querySelectorAll<HTMLButtonElement>("[data-symbol]").forEach((b) => {
        b.style.display = b.dataset.symbol!.includes(q) ? "" : "none";
      });
    });
    this.root.querySelector("#range-apply")?.addEventListener("click", () => {
      const from = this.el<HTMLInputElement>("#range-from").value;
      const to = this.el<HTMLInputElement>("#range-to").value;
      try {
        this.state.chooseRange(from, to);
        this.renderWizard();
      } catch (err) {
        this.flash(String(err));
      }
    });
    this.root.querySelectorAll<HTMLInputElement>("[data-measure]").forEach((cb) =>
      cb.addEventListener("change", () => this.state.toggleMeasure(cb.dataset.measure!)),
    );
    this.root.querySelector("#to-results")?.addEventListener("click", () => {
      try {
        this.state.showResults();
        this.renderWizard();
      } catch (err) {
        this.flash(String(err));
      }
    });
  }

  private async refreshResults(): Promise<void> {
    const s = this.state.selections;
    try {
      this.series = await this.api.getSeries(s.symbol!, s.measures, s.from!, s.to!);
      const stats = await this.api.getSummary(s.symbol!, s.measures[0], s.from!, s.to!);
      this.el<HTMLElement>("#summary").innerHTML = summaryHtml(stats);
    } catch (err) {
      if ((err as Error).name === "AbortError") return; // superseded selection
      this.flash(err instanceof ApiError ? err.message : String(err));
      return;
    }
    this.renderChart();
    this.renderModelPanel();
  }

  private renderChart(): void {
    if (!this.series) return;
    const lines = seriesLines(this.series, this.state.selections.measures);
    this.chart = buildChart(lines, this.overlays, { zoom: this.zoom });
    const host = this.el<HTMLElement>("#chart");
    host.innerHTML = this.chart.svg;
    const svg = host.querySelector("svg")!;
    svg.addEventListener("mousemove", (ev) => {
      const rect = svg.getBoundingClientRect();
      const hit = nearestHotspot(this.chart!, ev.clientX - rect.left, ev.clientY - rect.top);
      const tip = this.el<HTMLElement>("#tooltip");
      if (hit) {
        tip.style.display = "block";
        tip.style.left = `${ev.clientX + 12}px`;
        tip.style.top = `${ev.clientY + 12}px`;
        tip.textContent = `${hit.series} · ${hit.date} · ${hit.value.toFixed(3)}`;
      } else {
        tip.style.display = "none";
      }
    });
    svg.addEventListener("mouseleave", () => {
      this.el<HTMLElement>("#tooltip").style.display = "none";
    });
    svg.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const rect = svg.getBoundingClientRect();
      const center = (ev.clientX - rect.left) / rect.width;
      this.zoom = zoomWindow(this.zoom, ev.deltaY < 0 ? 0.8 : 1.25, center);
      this.renderChart();
    });
  }

  private renderModelPanel(): void {
    const host = this.el<HTMLElement>("#models");
    const buttons = MODEL_FAMILIES.map(
      (f) => `<button class="choice" data-family="${f}">${MODEL_LABELS[f]}</button>`,
    ).join("");
    const addMeasure =
      `<select id="add-measure">` +
      MEASURE_NAMES.filter((m) => !this.state.selections.measures.includes(m))
        .map((m) => `<option>${m}</option>`)
        .join("") +
      `</select><button id="add-measure-btn" class="choice">add measure</button>`;
    const fitPanels = this.state.overlayedModels
      .map((id) => {
        const resp = this.estimates.get(id);
        if (!resp) return "";
        return (
          `<section class="fit-panel" data-fit="${id}"><h3>${id}</h3>` +
          parameterTableHtml(resp.fit) +
          diagnosticsHtml(resp.fit) +
          lossesHtml(resp) +
          (resp.notice ? `<p class="notice">${resp.notice}</p>` : "") +
          `</section>`
        );
      })
      .join("");
    host.innerHTML =
      `<div class="model-actions">${buttons}${addMeasure}` +
      `<button id="export-csv" class="choice">export CSV</button>` +
      `<button id="export-image" class="choice">export image</button></div>` +
      `<div id="fit-panels">${fitPanels}</div>`;
    this.bindModelPanel();
  }

  private bindModelPanel(): void {
    this.root.querySelectorAll<HTMLButtonElement>("[data-family]").forEach((b) =>
      b.addEventListener("click", () => void this.estimate(b.dataset.family!)),
    );
    this.root.querySelector("#add-measure-btn")?.addEventListener("click", () => {
      const sel = this.el<HTMLSelectElement>("#add-measure");
      if (sel.value) {
        this.state.addComparisonMeasure(sel.value);
        void this.refreshResults();
      }
    });
    this.root.querySelector("#export-csv")?.addEventListener("click", () => {
      if (!this.series) return;
      const csv = seriesToCsv(seriesLines(this.series, this.state.selections.measures));
      this.download(`${this.state.selections.symbol}_measures.csv`, `data:text/csv;charset=utf-8,${encodeURIComponent(csv)}`);
    });
    this.root.querySelector("#export-image")?.addEventListener("click", () => {
      if (this.chart) this.download(`${this.state.selections.symbol}_chart.svg`, chartImageUrl(this.chart.svg));
    });
  }

  private async estimate(family: string): Promise<void> {
    const s = this.state.selections;
    const fitId = `${family}:${s.symbol}:${s.measures[0]}`;
    try {
      const resp = await this.api.estimate({
        symbol: s.symbol!,
        measure: s.measures[0],
        family,
        from: s.from!,
        to: s.to!,
      });
      this.estimates.set(fitId, resp);
      this.overlays = this.overlays.filter((o) => o.fitId !== fitId);
      this.overlays.push(overlayFromEstimate(fitId, resp));
      this.state.addOverlay(fitId);
      this.renderChart();
      this.renderModelPanel();
    } catch (err) {
      // the under-750 threshold message (HTTP 422) surfaces verbatim
      this.flash(err instanceof ApiError ? err.message : `estimation failed: ${err}`);
    }
  }

  private download(filename: string, href: string): void {
    const a = this.root.createElement("a");
    a.href = href;
    a.download = filename;
    a.click();
  }

  private flash(message: string): void {
    const box = this.el<HTMLElement>("#flash");
    box.textContent = message;
    box.style.display = "block";
    setTimeout(() => (box.style.display = "none"), 6000);
  }
}

if (typeof document !== "undefined" && document.getElementById("wizard")) {
  const app = new App(document, new ApiClient(""));
  void app.start();
}
