#!/usr/bin/env node
// Iteration-count figure for the sweep tables: one trend line per operator
// against D or against the cavity length in wavelengths. Cells recorded as
// NA (no convergence) are left out. For subdomain sweeps a dashed 2D line
// marks the reference slope of two iterations per subdomain.

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
  type LegendEntry,
} from "./chart.js";
import { el, group, line, polylinePath } from "./svg.js";
import { DataError, loadSweep, groupBy, type SweepRow } from "./csv.js";

export interface SweepTable {
  xKey: "D" | "l_over_lambda";
  rows: SweepRow[];
}

export function render(table: SweepTable, job?: PlotJob): string {
  const logY = job?.logY ?? false;
  const solved = table.rows.filter(
    (r): r is SweepRow & { iterations: number } =>
      r.iterations !== "NA" && (!logY || r.iterations > 0),
  );
  if (solved.length === 0) {
    throw new DataError("empty data: every sweep cell is NA");
  }
  const againstD = table.xKey === "D";
  const xs = solved.map((r) => r.x);
  const ys = solved.map((r) => r.iterations);
  const withSlope = againstD && (job?.slope ?? true);
  const frame = newFrame(
    againstD
      ? "GMRES iterations vs subdomain count"
      : "GMRES iterations vs cavity length in wavelengths",
  );
  const xTicks = againstD ? [...new Set(xs)].sort((a, b) => a - b) : undefined;
  const x = linearScale([Math.min(...xs), Math.max(...xs)], xRange(frame));
  const yTop = Math.max(...ys, withSlope ? 2 * Math.max(...xs) : 1);
  const y = logY
    ? logScale([Math.max(Math.min(...ys), 1) / 2, yTop], yRange(frame))
    : linearScale([0, yTop * 1.05], yRange(frame));
  drawXAxis(frame, x, {
    label: againstD ? "D (subdomains)" : "cavity length / wavelength",
    ticks: xTicks,
    grid: true,
  });
  drawYAxis(frame, y, { label: "GMRES iterations", log: logY, grid: true });

  const parts: string[] = [];
  const legend: LegendEntry[] = [];
  if (withSlope) {
    const [d0, d1] = [Math.min(...xs), Math.max(...xs)];
    parts.push(
      line(x(d0), y(2 * d0), x(d1), y(2 * d1), {
        stroke: "#444444",
        "stroke-width": 1.2,
        "stroke-dasharray": "7,4",
      }),
    );
    legend.push({ label: "2D reference", color: "#444444", dash: "7,4" });
  }
  let index = 0;
  for (const [operator, block] of groupBy(solved, (r) => r.operator)) {
    const color = seriesColor(index);
    const points = [...block]
      .sort((a, b) => a.x - b.x)
      .map((r): [number, number] => [x(r.x), y(r.iterations)]);
    parts.push(
      el("path", {
        d: polylinePath(points),
        fill: "none",
        stroke: color,
        "stroke-width": 1.6,
      }),
    );
    for (const [px, py] of points) {
      parts.push(el("circle", { cx: px, cy: py, r: 2.8, fill: color }));
    }
    legend.push({ label: operator, color, marker: true });
    index += 1;
  }
  frame.parts.push(group({ "clip-path": "url(#plot)" }, parts));
  drawLegend(frame, legend, "top-left");
  return frameToSvg(frame);
}

export function main(argv: string[]): number {
  return runPlot(argv, "iterations", (job) => render(loadSweep(job.input), job));
}

if (isEntry(import.meta.url)) process.exit(main(process.argv.slice(2)));
