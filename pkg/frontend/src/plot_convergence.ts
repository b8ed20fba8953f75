#!/usr/bin/env node
// Residual-history figure: one semilog-y curve per operator, legend sorted
// by the residual each operator finished at.

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
import { el, group, polylinePath } from "./svg.js";
import { DataError, groupBy, loadConvergence, type ConvergenceRow } from "./csv.js";

interface Curve {
  operator: string;
  color: string;
  points: Array<[number, number]>; // (iter, residual > 0), sorted by iter
  final: number; // residual at the last iteration
}

function toCurves(rows: ConvergenceRow[]): Curve[] {
  const curves: Curve[] = [];
  let index = 0;
  for (const [operator, block] of groupBy(rows, (r) => r.operator)) {
    const sorted = [...block].sort((a, b) => a.iter - b.iter);
    const points = sorted
      .filter((r) => r.relative_residual > 0)
      .map((r): [number, number] => [r.iter, r.relative_residual]);
    if (points.length === 0) continue;
    curves.push({
      operator,
      color: seriesColor(index),
      points,
      final: points[points.length - 1]![1],
    });
    index += 1;
  }
  return curves;
}

export function render(rows: ConvergenceRow[], _job?: PlotJob): string {
  const curves = toCurves(rows);
  if (curves.length === 0) {
    throw new DataError("empty data: no residual rows to plot");
  }
  const iters = curves.flatMap((c) => c.points.map((p) => p[0]));
  const residuals = curves.flatMap((c) => c.points.map((p) => p[1]));
  const frame = newFrame("GMRES convergence history");
  const x = linearScale([0, Math.max(...iters, 1)], xRange(frame));
  const y = logScale([Math.min(...residuals), Math.max(...residuals)], yRange(frame));
  drawXAxis(frame, x, { label: "iteration", grid: true });
  drawYAxis(frame, y, { label: "relative residual", log: true, grid: true });
  const paths = curves.map((c) =>
    el("path", {
      d: polylinePath(c.points.map(([i, r]): [number, number] => [x(i), y(r)])),
      fill: "none",
      stroke: c.color,
      "stroke-width": 1.6,
    }),
  );
  frame.parts.push(group({ "clip-path": "url(#plot)" }, paths));
  const legend: LegendEntry[] = [...curves]
    .sort((a, b) => a.final - b.final)
    .map((c) => ({ label: c.operator, color: c.color }));
  drawLegend(frame, legend, "bottom-left");
  return frameToSvg(frame);
}

export function main(argv: string[]): number {
  return runPlot(argv, "convergence", (job) => render(loadConvergence(job.input), job));
}

if (isEntry(import.meta.url)) process.exit(main(process.argv.slice(2)));
