import assert from "node:assert/strict";
import { test } from "node:test";

import { buildChart, nearestHotspot, zoomWindow } from "../src/chart.js";
import { chartImageUrl, seriesToCsv } from "../src/export.js";
import { overlayFromEstimate, seriesLines } from "../src/overlay.js";
import { estimateAmem21, series } from "./fixtures.js";

test("two measures render as two polylines on shared axes", () => {
  const lines = seriesLines(series, ["rv1", "bv1"]);
  const model = buildChart(lines);
  const count = (model.svg.match(/class="series-line"/g) ?? []).length;
  assert.equal(count, 2);
  assert.ok(model.svg.includes('data-series="rv1"'));
  assert.ok(model.svg.includes('data-series="bv1"'));
  assert.equal(model.empty, false);
});

test("forecast band renders only after the sample end", () => {
  const lines = seriesLines(series, ["rv1"]);
  const overlay = overlayFromEstimate("amem21:MSFT:rv1", estimateAmem21);
  const model = buildChart(lines, [overlay]);
  assert.ok(model.svg.includes('class="forecast-band"'), "band polygon present");
  assert.ok(model.svg.includes('class="fitted-line"'));
  assert.ok(model.svg.includes('class="forecast-line"'));

  const lastFitted = Math.max(
    ...model.hotspots.filter((h) => h.series.endsWith("fitted")).map((h) => h.x),
  );
  const firstForecast = Math.min(
    ...model.hotspots.filter((h) => h.series.endsWith("forecast")).map((h) => h.x),
  );
  assert.ok(firstForecast > lastFitted, "forecast points start past the in-sample range");

  const bandMatch = model.svg.match(/class="forecast-band"[^/]*points="([^"]+)"/);
  assert.ok(bandMatch, "band has points");
  const bandXs = bandMatch![1].split(" ").map((p) => Number(p.split(",")[0]));
  assert.ok(Math.min(...bandXs) > lastFitted, "band sits entirely after the sample");
});

test("hover hotspot carries date and value", () => {
  const lines = seriesLines(series, ["rv1"]);
  const model = buildChart(lines);
  const target = model.hotspots[2];
  const hit = nearestHotspot(model, target.x + 1, target.y - 1);
  assert.equal(hit?.date, target.date);
  assert.equal(hit?.value, target.value);
});

test("empty series yields guidance panel", () => {
  const model = buildChart([]);
  assert.equal(model.empty, true);
  assert.ok(model.svg.includes("No data in the selected window"));
});

test("zoom narrows the visible date domain", () => {
  const lines = seriesLines(series, ["rv1"]);
  const full = buildChart(lines);
  const zoomed = buildChart(lines, [], { zoom: { start: 0.4, end: 0.8 } });
  assert.ok(zoomed.dateDomain.length < full.dateDomain.length);
  const w1 = zoomWindow(undefined, 0.8);
  const w2 = zoomWindow(w1, 0.8);
  assert.ok(w2.end - w2.start < w1.end - w1.start);
  assert.ok(w2.start >= 0 && w2.end <= 1);
});

test("csv export is wide with one column per series", () => {
  const csv = seriesToCsv(seriesLines(series, ["rv1", "bv1"]));
  const rows = csv.trim().split("\n");
  assert.equal(rows[0], "date,rv1,bv1");
  assert.equal(rows.length, 1 + series.rows.length);
  assert.ok(rows[1].startsWith("2022-01-03,15,14"));
});

test("chart image is an svg data url", () => {
  const model = buildChart(seriesLines(series, ["rv1"]));
  const url = chartImageUrl(model.svg);
  assert.ok(url.startsWith("data:image/svg+xml;base64,"));
  const decoded = Buffer.from(url.split(",")[1], "base64").toString("utf-8");
  assert.ok(decoded.startsWith("<svg"));
});
