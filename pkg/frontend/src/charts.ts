/** SVG chart builders for the three report plot families: decision boundary
 * versus sample size, operating characteristics versus sample size, and
 * operating characteristics versus true effect value.
 *
 * Builders are pure (report in, SVG string out) so they are unit-testable
 * without a DOM. When a Monte Carlo standard error series is present, each
 * probability line gets a shaded +/- 2 SE band. */

import type { PlotSeries, RunReport } from "./types.js";
import { formatSig } from "./format.js";

export interface ChartOptions {
  width: number;
  height: number;
  margin: number;
}

const DEFAULTS: ChartOptions = { width: 560, height: 320, margin: 48 };

const SERIES_COLORS: Record<string, string> = {
  p_go: "#2e7d32",
  p_nogo: "#c62828",
  p_inconclusive: "#f9a825",
  p_stop_interim: "#6a1b9a",
  go_boundary: "#2e7d32",
  nogo_boundary: "#c62828",
};

const AXIS_LABELS: Record<string, { x: string; y: string }> = {
  cutoff_vs_n: { x: "sample size", y: "decision boundary" },
  oc_vs_n: { x: "sample size", y: "probability" },
  oc_vs_true_value: { x: "true value", y: "probability" },
};

interface Scale {
  (v: number): number;
}

function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

function polyline(
  xs: number[],
  ys: number[],
  sx: Scale,
  sy: Scale,
  color: string,
  cls: string,
): string {
  const pts = xs
    .map((x, i) => `${sx(x).toFixed(2)},${sy(ys[i] ?? 0).toFixed(2)}`)
    .join(" ");
  return `<polyline class="${cls}" fill="none" stroke="${color}" stroke-width="2" points="${pts}"/>`;
}

function band(
  xs: number[],
  ys: number[],
  ses: number[],
  sx: Scale,
  sy: Scale,
  color: string,
): string {
  const upper = xs.map(
    (x, i) =>
      `${sx(x).toFixed(2)},${sy((ys[i] ?? 0) + 2 * (ses[i] ?? 0)).toFixed(2)}`,
  );
  const lower = xs
    .map(
      (x, i) =>
        `${sx(x).toFixed(2)},${sy((ys[i] ?? 0) - 2 * (ses[i] ?? 0)).toFixed(2)}`,
    )
    .reverse();
  return `<polygon class="mc-band" fill="${color}" fill-opacity="0.15" stroke="none" points="${[...upper, ...lower].join(" ")}"/>`;
}

/** Render one plot family to an SVG string. */
export function renderChart(
  plot: PlotSeries,
  options: Partial<ChartOptions> = {},
): string {
  const { width, height, margin } = { ...DEFAULTS, ...options };
  const seriesNames = Object.keys(plot.series).filter((k) => k !== "mc_se");
  const mcSe = plot.series["mc_se"];
  const allY = seriesNames.flatMap((k) => plot.series[k] ?? []);
  const sx = linearScale(extent(plot.x), [margin, width - margin]);
  const sy = linearScale(extent(allY), [height - margin, margin]);
  const labels = AXIS_LABELS[plot.kind] ?? { x: "", y: "" };

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" class="chart chart-${plot.kind}">`,
    `<line x1="${margin}" y1="${height - margin}" x2="${width - margin}" y2="${height - margin}" stroke="#555"/>`,
    `<line x1="${margin}" y1="${margin}" x2="${margin}" y2="${height - margin}" stroke="#555"/>`,
    `<text x="${width / 2}" y="${height - 8}" text-anchor="middle" class="axis-label">${labels.x}</text>`,
    `<text x="14" y="${height / 2}" text-anchor="middle" transform="rotate(-90 14 ${height / 2})" class="axis-label">${labels.y}</text>`,
  ];
  for (const name of seriesNames) {
    const ys = plot.series[name] ?? [];
    const color = SERIES_COLORS[name] ?? "#1565c0";
    if (mcSe && mcSe.some((s) => s > 0)) {
      parts.push(band(plot.x, ys, mcSe, sx, sy, color));
    }
    parts.push(polyline(plot.x, ys, sx, sy, color, `series-${name}`));
  }
  parts.push("</svg>");
  return parts.join("\n");
}

/** Render every plot family in the report, keyed by kind. */
export function renderAllCharts(
  report: RunReport,
  options: Partial<ChartOptions> = {},
): Record<string, string> {
  const out: Record<string, string> = {};
  for (const plot of report.plot_series) {
    out[plot.kind] = renderChart(plot, options);
  }
  return out;
}

/** Compact legend entries for a plot. */
export function legendEntries(
  plot: PlotSeries,
): { name: string; color: string }[] {
  return Object.keys(plot.series)
    .filter((k) => k !== "mc_se")
    .map((name) => ({ name, color: SERIES_COLORS[name] ?? "#1565c0" }));
}

/** Tooltip text for a point, formatted like the report's own numbers. */
export function pointLabel(plot: PlotSeries, name: string, i: number): string {
  const x = plot.x[i];
  const y = plot.series[name]?.[i];
  if (x === undefined || y === undefined) return "";
  return `${name}: ${formatSig(y)} at ${formatSig(x)}`;
}
