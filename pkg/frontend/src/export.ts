/** Export helpers: raw-data CSV and a chart image, both from the current view. */

import type { SeriesLine } from "./chart.js";

/** Wide CSV: one row per date, one column per plotted series. */
export function seriesToCsv(lines: SeriesLine[]): string {
  const dates = [...new Set(lines.flatMap((l) => l.dates))].sort();
  const header = ["date", ...lines.map((l) => l.name)];
  const byName = lines.map((l) => {
    const m = new Map<string, number | null>();
    l.dates.forEach((d, i) => m.set(d, l.values[i]));
    return m;
  });
  const rows = dates.map((d) =>
    [d, ...byName.map((m) => {
      const v = m.get(d);
      return v === null || v === undefined ? "" : String(v);
    })].join(","),
  );
  return [header.join(","), ...rows].join("\n") + "\n";
}

/** Chart image as an SVG data URL, ready for an <a download> link. */
export function chartImageUrl(svg: string): string {
  const b64 =
    typeof btoa !== "undefined"
      ? btoa(unescape(encodeURIComponent(svg)))
      : Buffer.from(svg, "utf-8").toString("base64");
  return `data:image/svg+xml;base64,${b64}`;
}
