import { describe, expect, it } from "vitest";

import { legendEntries, pointLabel, renderChart } from "../src/charts.js";
import type { PlotSeries } from "../src/types.js";

const OC_PLOT: PlotSeries = {
  kind: "oc_vs_true_value",
  x: [0.1, 0.2, 0.3, 0.4],
  series: {
    p_go: [0.01, 0.11, 0.49, 0.85],
    p_nogo: [0.9, 0.62, 0.19, 0.03],
    p_inconclusive: [0.09, 0.27, 0.32, 0.12],
  },
};

describe("chart rendering", () => {
  it("draws one polyline per probability series", () => {
    const svg = renderChart(OC_PLOT);
    expect(svg).toContain("<svg");
    expect(svg).toContain('class="series-p_go"');
    expect(svg).toContain('class="series-p_nogo"');
    expect(svg).toContain('class="series-p_inconclusive"');
    expect(svg.match(/<polyline/g)).toHaveLength(3);
  });

  it("adds an error band per series when Monte Carlo SE is present", () => {
    const withSe: PlotSeries = {
      ...OC_PLOT,
      series: { ...OC_PLOT.series, mc_se: [0.01, 0.01, 0.01, 0.01] },
    };
    expect(renderChart(OC_PLOT)).not.toContain("mc-band");
    const svg = renderChart(withSe);
    expect(svg.match(/mc-band/g)).toHaveLength(3);
    // the SE pseudo-series is never drawn as a line of its own
    expect(svg).not.toContain('class="series-mc_se"');
  });

  it("labels axes per plot family", () => {
    expect(renderChart(OC_PLOT)).toContain(">true value<");
    const byN: PlotSeries = { ...OC_PLOT, kind: "oc_vs_n", x: [20, 30, 40, 50] };
    expect(renderChart(byN)).toContain(">sample size<");
    const cutoffs: PlotSeries = {
      kind: "cutoff_vs_n",
      x: [20, 30],
      series: { go_boundary: [7, 9], nogo_boundary: [4, 6] },
    };
    expect(renderChart(cutoffs)).toContain(">decision boundary<");
  });

  it("keeps every x sample in the polyline", () => {
    const svg = renderChart(OC_PLOT);
    const line = svg.split("\n").find((l) => l.includes("series-p_go"))!;
    const points = line.match(/points="([^"]+)"/)![1]!;
    expect(points.split(" ")).toHaveLength(OC_PLOT.x.length);
  });

  it("renders a single point without collapsing the scale", () => {
    const single: PlotSeries = {
      kind: "oc_vs_n",
      x: [25],
      series: { p_go: [0.49] },
    };
    const svg = renderChart(single);
    expect(svg).toContain("series-p_go");
    expect(svg).not.toContain("NaN");
  });
});

describe("legend and tooltips", () => {
  it("legend covers the plotted series only", () => {
    const withSe: PlotSeries = {
      ...OC_PLOT,
      series: { ...OC_PLOT.series, mc_se: [0, 0, 0, 0] },
    };
    expect(legendEntries(withSe).map((e) => e.name)).toEqual([
      "p_go",
      "p_nogo",
      "p_inconclusive",
    ]);
  });

  it("tooltip text uses report-style number formatting", () => {
    expect(pointLabel(OC_PLOT, "p_go", 2)).toBe("p_go: 0.49 at 0.3");
    expect(pointLabel(OC_PLOT, "p_go", 99)).toBe("");
  });
});
