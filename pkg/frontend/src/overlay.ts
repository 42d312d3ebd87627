/** Pure builders turning service responses into chart overlays and HTML
 * fragments. Everything numeric comes straight from the response. */

import type { ModelOverlay, SeriesLine } from "./chart.js";
import type { EstimateResponse, FitReport, SeriesResponse, SummaryStats } from "./types.js";
import { MODEL_LABELS, type ModelFamily } from "./types.js";

export function seriesLines(resp: SeriesResponse, measures: string[]): SeriesLine[] {
  return measures.map((name) => ({
    name,
    kind: "measure" as const,
    dates: resp.rows.filter((r) => name in r.annualized).map((r) => r.date),
    values: resp.rows.filter((r) => name in r.annualized).map((r) => r.annualized[name]),
  }));
}

/** Fitted values overlay the sample; the band exists only past the sample
 * end, where the forecast dates start. */
export function overlayFromEstimate(fitId: string, resp: EstimateResponse): ModelOverlay {
  const label = MODEL_LABELS[resp.fit.family as ModelFamily] ?? resp.fit.family;
  const fitted: SeriesLine = {
    name: `${label} fitted`,
    kind: "fitted",
    dates: resp.fit.fitted_dates,
    values: resp.fit.annualized_fitted,
  };
  let forecast: SeriesLine | null = null;
  let band = null;
  if (resp.forecast) {
    forecast = {
      name: `${label} forecast`,
      kind: "forecast",
      dates: resp.forecast.dates,
      values: resp.forecast.annualized.point,
    };
    band = {
      dates: resp.forecast.dates,
      low: resp.forecast.annualized.ci_low,
      high: resp.forecast.annualized.ci_high,
    };
  }
  return { fitId, label, fitted, forecast, band };
}

const fmtNum = (v: number | null, digits = 4): string =>
  v === null || !Number.isFinite(v) ? "-" : v.toFixed(digits);

export function parameterTableHtml(fit: FitReport): string {
  const rows = fit.parameters
    .map(
      (p) =>
        `<tr><td>${p.name}</td><td>${fmtNum(p.estimate)}</td><td>${fmtNum(p.std_error)}</td>` +
        `<td>${fmtNum(p.z, 2)}</td><td>${fmtNum(p.p_value)}</td></tr>`,
    )
    .join("");
  const gof =
    fit.r_squared !== null
      ? `R&sup2; ${fmtNum(fit.r_squared)}`
      : `log-likelihood ${fmtNum(fit.loglik, 2)}`;
  return (
    `<table class="param-table"><thead><tr><th>parameter</th><th>estimate</th>` +
    `<th>std error</th><th>z</th><th>p-value</th></tr></thead><tbody>${rows}</tbody></table>` +
    `<p class="fit-meta">${fit.family} on ${fit.measure}, n=${fit.n_obs}, ${gof}</p>`
  );
}

export function diagnosticsHtml(fit: FitReport): string {
  const d = fit.diagnostics;
  const verdict = (p: number) => (p > 0.05 ? "pass" : "reject");
  return (
    `<ul class="diagnostics">` +
    `<li>Ljung-Box(${d.lags}): p=${fmtNum(d.lb_pvalue)} (${verdict(d.lb_pvalue)})</li>` +
    `<li>Ljung-Box&sup2;(${d.lags}): p=${fmtNum(d.lb2_pvalue)} (${verdict(d.lb2_pvalue)})</li>` +
    `<li>ARCH(${d.lags}): p=${fmtNum(d.arch_pvalue)} (${verdict(d.arch_pvalue)})</li>` +
    `</ul>`
  );
}

export function lossesHtml(resp: EstimateResponse): string {
  if (!resp.forecast) return "";
  const f = resp.forecast;
  return `<p class="losses">H=${f.horizon}, MSE ${f.mse.toExponential(3)}, QLIKE ${
    f.qlike === null ? "-" : f.qlike.toExponential(3)
  }</p>`;
}

export function summaryHtml(stats: SummaryStats): string {
  const cell = (label: string, v: number | null, digits = 3) =>
    `<div class="stat"><span class="stat-label">${label}</span><span class="stat-value">${
      v === null ? "-" : v.toFixed(digits)
    }</span></div>`;
  return (
    cell("avg volatility", stats.avg_vol, 2) +
    cell("vol of vol", stats.vol_of_vol, 2) +
    cell("avg return", stats.avg_return, 5) +
    cell("avg volume", stats.avg_volume, 0)
  );
}
