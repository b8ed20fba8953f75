#!/usr/bin/env node
// Symbol-comparison figure. Two table shapes are accepted:
//   - `symbols` output (re, im): solid Re and dashed Im curves per operator
//     on a linear axis, windowed to robust quantiles because the exact
//     cavity symbol blows up at interior resonances;
//   - `radius` output (rho_abs): one |rho| curve per operator on a log
//     axis, with exact zeros (deeply evanescent modes) left out.
// Both get a vertical guide at s/k = 1, the propagating/evanescent border.

import { isEntry, runPlot, type PlotJob } from "./cli.js";
import {
  drawLegend,
  drawXAxis,
  drawYAxis,
  frameToSvg,
  linearScale,
  logScale,
  newFrame,
  seriesColor,
  xRange,
  yRange,
  type Frame,
  type LegendEntry,
  type Scale,
} from "./chart.js";
import { el, group, line, polylinePath } from "./svg.js";
import {
  DataError,
  UsageError,
  groupBy,
  loadSymbolsOrRadius,
  type RadiusRow,
  type SymbolsOrRadius,
  type SymbolsRow,
} from "./csv.js";

function quantile(sorted: number[], q: number): number {
  return sorted[Math.floor(q * (sorted.length - 1))]!;
}

function cutoffGuide(frame: Frame, x: Scale): string {
  return line(x(1), frame.top, x(1), frame.top + frame.plotH, {
    stroke: "#aaaaaa",
    "stroke-width": 0.9,
    "stroke-dasharray": "3,3",
  });
}

function renderSymbols(rows: SymbolsRow[]): string {
  if (rows.length === 0) throw new DataError("empty data: no symbol rows to plot");
  const frame = newFrame("Transmission-operator symbols");
  const x = linearScale(
    [Math.min(...rows.map((r) => r.s_over_k)), Math.max(...rows.map((r) => r.s_over_k))],
    xRange(frame),
  );
  // Robust window: resonances of the exact cavity symbol dwarf everything
  // on a naive min/max axis.
  const values = rows.flatMap((r) => [r.re, r.im]).sort((a, b) => a - b);
  let lo = quantile(values, 0.02);
  let hi = quantile(values, 0.98);
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = 0.08 * (hi - lo);
  const y = linearScale([lo - pad, hi + pad], yRange(frame));
  drawXAxis(frame, x, { label: "s / k", grid: true });
  drawYAxis(frame, y, { label: "symbol value", grid: true });

  const parts: string[] = [cutoffGuide(frame, x)];
  const legend: LegendEntry[] = [];
  let index = 0;
  for (const [operator, block] of groupBy(rows, (r) => r.operator)) {
    const color = seriesColor(index);
    const sorted = [...block].sort((a, b) => a.s_over_k - b.s_over_k);
    const re = sorted.map((r): [number, number] => [x(r.s_over_k), y(r.re)]);
    const im = sorted.map((r): [number, number] => [x(r.s_over_k), y(r.im)]);
    parts.push(
      el("path", { d: polylinePath(re), fill: "none", stroke: color, "stroke-width": 1.5 }),
      el("path", {
        d: polylinePath(im),
        fill: "none",
        stroke: color,
        "stroke-width": 1.5,
        "stroke-dasharray": "5,3",
      }),
    );
    legend.push({ label: `Re ${operator}`, color });
    legend.push({ label: `Im ${operator}`, color, dash: "5,3" });
    index += 1;
  }
  frame.parts.push(group({ "clip-path": "url(#plot)" }, parts));
  drawLegend(frame, legend, "bottom-left");
  return frameToSvg(frame);
}

function renderRadius(rows: RadiusRow[]): string {
  const positive = rows.filter((r) => r.rho_abs > 0);
  if (positive.length === 0) {
    throw new DataError("empty data: no positive convergence radii to plot");
  }
  const frame = newFrame("Per-mode convergence radius");
  const x = linearScale(
    [Math.min(...positive.map((r) => r.s_over_k)), Math.max(...positive.map((r) => r.s_over_k))],
    xRange(frame),
  );
  const y = logScale(
    [Math.min(...positive.map((r) => r.rho_abs)), Math.max(...positive.map((r) => r.rho_abs))],
    yRange(frame),
  );
  drawXAxis(frame, x, { label: "s / k", grid: true });
  drawYAxis(frame, y, { label: "|rho|", log: true, grid: true });

  const parts: string[] = [cutoffGuide(frame, x)];
  const legend: LegendEntry[] = [];
  let index = 0;
  for (const [operator, block] of groupBy(positive, (r) => r.operator)) {
    const color = seriesColor(index);
    const points = [...block]
      .sort((a, b) => a.s_over_k - b.s_over_k)
      .map((r): [number, number] => [x(r.s_over_k), y(r.rho_abs)]);
    parts.push(
      el("path", { d: polylinePath(points), fill: "none", stroke: color, "stroke-width": 1.5 }),
    );
    legend.push({ label: operator, color });
    index += 1;
  }
  frame.parts.push(group({ "clip-path": "url(#plot)" }, parts));
  drawLegend(frame, legend, "bottom-left");
  return frameToSvg(frame);
}

export function render(data: SymbolsOrRadius, job?: PlotJob): string {
  if (data.kind === "radius") return renderRadius(data.rows);
  if (job?.logY) {
    throw new UsageError("--log-y needs positive data; symbol tables carry signed Re/Im");
  }
  return renderSymbols(data.rows);
}

export function main(argv: string[]): number {
  return runPlot(argv, "symbols", (job) => render(loadSymbolsOrRadius(job.input), job));
}

if (isEntry(import.meta.url)) process.exit(main(process.argv.slice(2)));
