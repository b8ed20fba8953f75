#!/usr/bin/env node
// Spectrum figure: eigenvalues of the iteration operator as a scatter in
// the complex plane, with the reference circle |z - 1| = 1. Pixels per
// data unit are forced equal on both axes so the circle stays a circle.

import { isEntry, runPlot, type PlotJob } from "./cli.js";
import {
  drawLegend,
  drawXAxis,
  drawYAxis,
  frameToSvg,
  newFrame,
  seriesColor,
  type Frame,
  type LegendEntry,
} from "./chart.js";
import { scaleLinear } from "d3-scale";
import { el, group } from "./svg.js";
import { DataError, groupBy, loadSpectrum, type SpectrumRow } from "./csv.js";

export interface View {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
  unitsPerPx: number;
}

// Square view around the data and the reference circle; with --zoom W the
// window is (1, 0) +/- W instead.
export function spectrumView(rows: SpectrumRow[], frame: Frame, zoom?: number): View {
  let x0: number;
  let x1: number;
  let y0: number;
  let y1: number;
  if (zoom !== undefined) {
    x0 = 1 - zoom;
    x1 = 1 + zoom;
    y0 = -zoom;
    y1 = zoom;
  } else {
    // The circle spans [0, 2] x [-1, 1]; include it plus every point.
    x0 = Math.min(0, ...rows.map((r) => r.re));
    x1 = Math.max(2, ...rows.map((r) => r.re));
    y0 = Math.min(-1, ...rows.map((r) => r.im));
    y1 = Math.max(1, ...rows.map((r) => r.im));
    const padX = 0.05 * (x1 - x0);
    const padY = 0.05 * (y1 - y0);
    x0 -= padX;
    x1 += padX;
    y0 -= padY;
    y1 += padY;
  }
  const unitsPerPx = Math.max((x1 - x0) / frame.plotW, (y1 - y0) / frame.plotH);
  const cx = (x0 + x1) / 2;
  const cy = (y0 + y1) / 2;
  return {
    x0: cx - (unitsPerPx * frame.plotW) / 2,
    x1: cx + (unitsPerPx * frame.plotW) / 2,
    y0: cy - (unitsPerPx * frame.plotH) / 2,
    y1: cy + (unitsPerPx * frame.plotH) / 2,
    unitsPerPx,
  };
}

export function render(rows: SpectrumRow[], job?: PlotJob): string {
  if (rows.length === 0) throw new DataError("empty data: no eigenvalue rows to plot");
  const zoom = job?.zoom;
  const frame = newFrame(zoom === undefined ? "Iteration-operator spectrum" : "Iteration-operator spectrum (zoom)");
  const view = spectrumView(rows, frame, zoom);
  const x = scaleLinear().domain([view.x0, view.x1]).range([frame.left, frame.left + frame.plotW]);
  const y = scaleLinear().domain([view.y0, view.y1]).range([frame.top + frame.plotH, frame.top]);
  drawXAxis(frame, x, { label: "Re", grid: true });
  drawYAxis(frame, y, { label: "Im", grid: true });

  const clipped: string[] = [
    el("circle", {
      cx: x(1),
      cy: y(0),
      r: 1 / view.unitsPerPx,
      fill: "none",
      stroke: "#222222",
      "stroke-width": 1,
      "stroke-dasharray": "5,4",
    }),
  ];
  const dValues = new Set(rows.map((r) => r.D));
  const seriesKey = (r: SpectrumRow): string =>
    dValues.size > 1 ? `${r.operator} (D=${r.D})` : r.operator;
  const legend: LegendEntry[] = [];
  let index = 0;
  for (const [label, block] of groupBy(rows, seriesKey)) {
    const color = seriesColor(index);
    for (const r of block) {
      clipped.push(el("circle", { cx: x(r.re), cy: y(r.im), r: 2.2, fill: color, "fill-opacity": 0.75 }));
    }
    legend.push({ label, color, marker: true });
    index += 1;
  }
  frame.parts.push(group({ "clip-path": "url(#plot)" }, clipped));
  drawLegend(frame, legend, "top-right");
  return frameToSvg(frame);
}

export function main(argv: string[]): number {
  return runPlot(argv, "spectrum", (job) => render(loadSpectrum(job.input), job));
}

if (isEntry(import.meta.url)) process.exit(main(process.argv.slice(2)));
