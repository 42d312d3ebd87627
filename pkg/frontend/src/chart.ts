/** SVG chart builder: measure series, model fitted values, and forecast
 * bands, with hotspots for hover tooltips and an index-window zoom.
 *
 * This module is DOM-free on purpose: it turns server numbers into an SVG
 * string plus hotspot coordinates, and the walkthrough tests assert on that
 * output directly. The client never computes statistics, it only scales
 * server-provided values to pixels. */

export interface SeriesLine {
  name: string;
  dates: string[];
  values: (number | null)[];
  kind: "measure" | "fitted" | "forecast";
}

export interface ForecastBand {
  dates: string[];
  low: number[];
  high: number[];
}

export interface ModelOverlay {
  fitId: string;
  label: string;
  fitted: SeriesLine;
  forecast: SeriesLine | null;
  band: ForecastBand | null;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  /** visible index window as fractions of the date domain, for zooming */
  zoom?: { start: number; end: number };
}

export interface Hotspot {
  x: number;
  y: number;
  date: string;
  series: string;
  value: number;
}

export interface ChartModel {
  svg: string;
  hotspots: Hotspot[];
  dateDomain: string[];
  empty: boolean;
}

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];
const MARGIN = { top: 16, right: 24, bottom: 28, left: 56 };

function fmt(x: number): string {
  return Number.isInteger(x) ? String(x) : x.toFixed(2);
}

export function buildChart(
  lines: SeriesLine[],
  overlays: ModelOverlay[] = [],
  opts: ChartOptions = {},
): ChartModel {
  const width = opts.width ?? 860;
  const height = opts.height ?? 360;

  const allDates = new Set<string>();
  for (const line of lines) line.dates.forEach((d) => allDates.add(d));
  for (const ov of overlays) {
    ov.fitted.dates.forEach((d) => allDates.add(d));
    ov.forecast?.dates.forEach((d) => allDates.add(d));
    ov.band?.dates.forEach((d) => allDates.add(d));
  }
  let domain = [...allDates].sort();
  if (opts.zoom) {
    const lo = Math.max(0, Math.floor(domain.length * opts.zoom.start));
    const hi = Math.min(domain.length, Math.ceil(domain.length * opts.zoom.end));
    domain = domain.slice(lo, Math.max(hi, lo + 2));
  }
  if (domain.length === 0) {
    return {
      svg: `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" class="measure-chart empty"><text x="${width / 2}" y="${height / 2}" text-anchor="middle" class="empty-state">No data in the selected window. Widen the range or pick another measure.</text></svg>`,
      hotspots: [],
      dateDomain: [],
      empty: true,
    };
  }
  const index = new Map(domain.map((d, i) => [d, i]));

  const visible: number[] = [];
  const collect = (dates: string[], values: (number | null)[]) => {
    dates.forEach((d, i) => {
      const v = values[i];
      if (index.has(d) && v !== null && Number.isFinite(v)) visible.push(v);
    });
  };
  for (const line of lines) collect(line.dates, line.values);
  for (const ov of overlays) {
    collect(ov.fitted.dates, ov.fitted.values);
    if (ov.forecast) collect(ov.forecast.dates, ov.forecast.values);
    if (ov.band) {
      collect(ov.band.dates, ov.band.low);
      collect(ov.band.dates, ov.band.high);
    }
  }
  const loY = Math.min(0, ...visible);
  const hiY = Math.max(...visible) * 1.05 || 1;

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const x = (d: string) => MARGIN.left + ((index.get(d) ?? 0) / Math.max(domain.length - 1, 1)) * plotW;
  const y = (v: number) => MARGIN.top + (1 - (v - loY) / (hiY - loY)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" class="measure-chart">`,
  );
  // axes and gridlines
  for (let g = 0; g <= 4; g++) {
    const vy = MARGIN.top + (g / 4) * plotH;
    const label = hiY - (g / 4) * (hiY - loY);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${vy}" x2="${width - MARGIN.right}" y2="${vy}" class="gridline"/>`,
      `<text x="${MARGIN.left - 6}" y="${vy + 4}" text-anchor="end" class="axis-label">${fmt(label)}</text>`,
    );
  }
  const nTicks = Math.min(6, domain.length);
  for (let t = 0; t < nTicks; t++) {
    const d = domain[Math.floor((t / Math.max(nTicks - 1, 1)) * (domain.length - 1))];
    parts.push(
      `<text x="${x(d)}" y="${height - 8}" text-anchor="middle" class="axis-label">${d}</text>`,
    );
  }

  const hotspots: Hotspot[] = [];
  const polyline = (line: SeriesLine, color: string, cls: string) => {
    const pts: string[] = [];
    line.dates.forEach((d, i) => {
      const v = line.values[i];
      if (!index.has(d) || v === null || !Number.isFinite(v)) return;
      const px = x(d);
      const py = y(v);
      pts.push(`${px.toFixed(1)},${py.toFixed(1)}`);
      hotspots.push({ x: px, y: py, date: d, series: line.name, value: v });
    });
    if (pts.length) {
      parts.push(
        `<polyline fill="none" stroke="${color}" class="${cls}" data-series="${line.name}" points="${pts.join(" ")}"/>`,
      );
    }
  };

  lines.forEach((line, i) => polyline(line, PALETTE[i % PALETTE.length], "series-line"));

  overlays.forEach((ov, k) => {
    const color = PALETTE[(lines.length + k) % PALETTE.length];
    if (ov.band) {
      const upper: string[] = [];
      const lower: string[] = [];
      ov.band.dates.forEach((d, i) => {
        if (!index.has(d)) return;
        upper.push(`${x(d).toFixed(1)},${y(ov.band!.high[i]).toFixed(1)}`);
        lower.unshift(`${x(d).toFixed(1)},${y(ov.band!.low[i]).toFixed(1)}`);
      });
      if (upper.length) {
        parts.push(
          `<polygon class="forecast-band" data-fit="${ov.fitId}" fill="${color}" fill-opacity="0.18" stroke="none" points="${[...upper, ...lower].join(" ")}"/>`,
        );
      }
    }
    polyline({ ...ov.fitted, name: `${ov.label} fitted` }, color, "fitted-line");
    if (ov.forecast) {
      polyline({ ...ov.forecast, name: `${ov.label} forecast` }, color, "forecast-line");
    }
  });

  parts.push("</svg>");
  return { svg: parts.join(""), hotspots, dateDomain: domain, empty: false };
}

/** Closest hotspot to the pointer, for tooltips showing value and date. */
export function nearestHotspot(model: ChartModel, px: number, py: number): Hotspot | null {
  let best: Hotspot | null = null;
  let bestDist = Infinity;
  for (const h of model.hotspots) {
    const d = (h.x - px) ** 2 + (h.y - py) ** 2;
    if (d < bestDist) {
      bestDist = d;
      best = h;
    }
  }
  return best;
}

/** Narrow the visible window by fractions of the current domain (zoom in/out). */
export function zoomWindow(
  current: { start: number; end: number } | undefined,
  factor: number,
  center = 0.5,
): { start: number; end: number } {
  const cur = current ?? { start: 0, end: 1 };
  const span = (cur.end - cur.start) * factor;
  const mid = cur.start + (cur.end - cur.start) * center;
  const start = Math.max(0, mid - span / 2);
  const end = Math.min(1, start + span);
  return { start, end };
}
