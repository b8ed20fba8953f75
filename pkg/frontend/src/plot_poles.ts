#!/usr/bin/env node
// Pole-convergence figure: for each pole index i the square root of the
// decomposition pole B_i, plotted against the number of terms n. With
// --guides the limits are drawn too: sqrt(B_i) tends to i*pi for the
// 1-based index used in the table.

import { isEntry, runPlot, type PlotJob } from "./cli.js";
import {
  drawLegend,
  drawXAxis,
  drawYAxis,
  frameToSvg,
  linearScale,
  newFrame,
  seriesColor,
  yRange,
  type LegendEntry,
} from "./chart.js";
import { scaleLog } from "d3-scale";
import { el, group, line, polylinePath, textEl } from "./svg.js";
import { DataError, groupBy, loadPoles, type PolesRow } from "./csv.js";

export function render(rows: PolesRow[], job?: PlotJob): string {
  const poleCount = job?.poleCount ?? 6;
  const kept = rows.filter((r) => r.i <= poleCount);
  if (kept.length === 0) {
    throw new DataError(`empty data: no rows with pole index <= ${poleCount}`);
  }
  const nValues = [...new Set(kept.map((r) => r.n))].sort((a, b) => a - b);
  const maxRoot = Math.max(...kept.map((r) => r.sqrt_b_i));
  const maxGuide = (job?.guides ?? false) ? poleCount * Math.PI : 0;
  const frame = newFrame("Square roots of the decomposition poles");
  const x = scaleLog()
    .base(2)
    .domain([nValues[0]!, nValues[nValues.length - 1]!])
    .range([frame.left, frame.left + frame.plotW]);
  const y = linearScale([0, Math.max(maxRoot, maxGuide) * 1.06], yRange(frame));
  drawXAxis(frame, x, { label: "n (terms in the decomposition)", ticks: nValues, grid: true });
  drawYAxis(frame, y, { label: "sqrt(B_i)", grid: true });

  const parts: string[] = [];
  if (job?.guides) {
    for (let i = 1; i <= poleCount; i += 1) {
      const g = i * Math.PI;
      parts.push(
        line(frame.left, y(g), frame.left + frame.plotW, y(g), {
          stroke: "#888888",
          "stroke-width": 0.9,
          "stroke-dasharray": "6,4",
        }),
        textEl(frame.left + frame.plotW - 4, y(g) - 4, `${i}π`, {
          "text-anchor": "end",
          "font-size": 10,
          fill: "#666666",
        }),
      );
    }
  }
  const legend: LegendEntry[] = [];
  let index = 0;
  for (const [key, block] of groupBy(kept, (r) => String(r.i))) {
    const color = seriesColor(index);
    const points = [...block]
      .sort((a, b) => a.n - b.n)
      .map((r): [number, number] => [x(r.n), y(r.sqrt_b_i)]);
    parts.push(
      el("path", {
        d: polylinePath(points),
        fill: "none",
        stroke: color,
        "stroke-width": 1.6,
      }),
    );
    for (const [px, py] of points) {
      parts.push(el("circle", { cx: px, cy: py, r: 2.5, fill: color }));
    }
    legend.push({ label: `pole ${key}`, color, marker: true });
    index += 1;
  }
  frame.parts.push(group({ "clip-path": "url(#plot)" }, parts));
  drawLegend(frame, legend, "bottom-right");
  return frameToSvg(frame);
}

export function main(argv: string[]): number {
  return runPlot(argv, "poles", (job) => render(loadPoles(job.input), job));
}

if (isEntry(import.meta.url)) process.exit(main(process.argv.slice(2)));
