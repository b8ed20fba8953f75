// Shared chart scaffolding: margins, axes, tick labels, palette, legend.
// Everything draws into a Frame, which is then serialized once.

import { scaleLinear, scaleLog, type ScaleContinuousNumeric } from "d3-scale";
import { el, fmt, group, line, svgDocument, textEl } from "./svg.js";

export type Scale = ScaleContinuousNumeric<number, number>;

// Qualitative palette (Tol bright), cycled when a figure has more series.
const PALETTE = [
  "#4477aa",
  "#ee6677",
  "#228833",
  "#ccbb44",
  "#66ccee",
  "#aa3377",
  "#bbbbbb",
];

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length]!;
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  top: number;
  plotW: number;
  plotH: number;
  parts: string[];
}

export function newFrame(title: string, width = 760, height = 520): Frame {
  const margin = { top: 42, right: 18, bottom: 52, left: 74 };
  const frame: Frame = {
    width,
    height,
    left: margin.left,
    top: margin.top,
    plotW: width - margin.left - margin.right,
    plotH: height - margin.top - margin.bottom,
    parts: [],
  };
  frame.parts.push(
    el(
      "clipPath",
      { id: "plot" },
      el("rect", { x: frame.left, y: frame.top, width: frame.plotW, height: frame.plotH }),
    ),
    textEl(width / 2, 24, title, {
      "text-anchor": "middle",
      "font-size": 15,
      fill: "#222222",
    }),
  );
  return frame;
}

export function frameToSvg(frame: Frame): string {
  return svgDocument(frame.width, frame.height, frame.parts);
}

// ---------------------------------------------------------------- scales

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  return scaleLinear().domain(domain).range(range).nice();
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  return scaleLog().domain(domain).range(range).nice();
}

export function xRange(frame: Frame): [number, number] {
  return [frame.left, frame.left + frame.plotW];
}

export function yRange(frame: Frame): [number, number] {
  return [frame.top + frame.plotH, frame.top];
}

function linearLabel(v: number): string {
  // Tick values from d3 are already round; avoid 0.30000000000000004.
  const r = Number(v.toPrecision(10));
  return fmt(r);
}

function logLabel(v: number): string {
  const e = Math.log10(v);
  const n = Math.round(e);
  if (Math.abs(e - n) < 1e-9) {
    if (n >= -2 && n <= 3) return fmt(v);
    return `1e${n}`;
  }
  return fmt(v);
}

function powerOfTenTicks(scale: Scale): number[] {
  const all = scale.ticks();
  const powers = all.filter((t) => {
    const e = Math.log10(t);
    return Math.abs(e - Math.round(e)) < 1e-9;
  });
  return powers.length >= 2 ? powers : all;
}

// ------------------------------------------------------------------ axes

export interface AxisOptions {
  label: string;
  log?: boolean;
  ticks?: number[];
  tickLabel?: (v: number) => string;
  grid?: boolean;
}

export function drawXAxis(frame: Frame, scale: Scale, opts: AxisOptions): void {
  const y0 = frame.top + frame.plotH;
  const ticks = opts.ticks ?? (opts.log ? powerOfTenTicks(scale) : scale.ticks(8));
  const label = opts.tickLabel ?? (opts.log ? logLabel : linearLabel);
  const parts: string[] = [
    line(frame.left, y0, frame.left + frame.plotW, y0, { stroke: "#222222" }),
  ];
  for (const t of ticks) {
    const x = scale(t);
    if (x < frame.left - 0.5 || x > frame.left + frame.plotW + 0.5) continue;
    if (opts.grid) {
      parts.push(line(x, frame.top, x, y0, { stroke: "#dddddd", "stroke-width": 0.6 }));
    }
    parts.push(
      line(x, y0, x, y0 + 5, { stroke: "#222222" }),
      textEl(x, y0 + 19, label(t), {
        "text-anchor": "middle",
        "font-size": 11,
        fill: "#222222",
      }),
    );
  }
  parts.push(
    textEl(frame.left + frame.plotW / 2, y0 + 38, opts.label, {
      "text-anchor": "middle",
      "font-size": 13,
      fill: "#222222",
    }),
  );
  frame.parts.push(group({}, parts));
}

export function drawYAxis(frame: Frame, scale: Scale, opts: AxisOptions): void {
  const x0 = frame.left;
  const ticks = opts.ticks ?? (opts.log ? powerOfTenTicks(scale) : scale.ticks(7));
  const label = opts.tickLabel ?? (opts.log ? logLabel : linearLabel);
  const parts: string[] = [
    line(x0, frame.top, x0, frame.top + frame.plotH, { stroke: "#222222" }),
  ];
  for (const t of ticks) {
    const y = scale(t);
    if (y < frame.top - 0.5 || y > frame.top + frame.plotH + 0.5) continue;
    if (opts.grid) {
      parts.push(
        line(x0, y, x0 + frame.plotW, y, { stroke: "#dddddd", "stroke-width": 0.6 }),
      );
    }
    parts.push(
      line(x0 - 5, y, x0, y, { stroke: "#222222" }),
      textEl(x0 - 8, y + 3.5, label(t), {
        "text-anchor": "end",
        "font-size": 11,
        fill: "#222222",
      }),
    );
  }
  parts.push(
    group(
      { transform: `translate(16,${frame.top + frame.plotH / 2}) rotate(-90)` },
      [
        textEl(0, 0, opts.label, {
          "text-anchor": "middle",
          "font-size": 13,
          fill: "#222222",
        }),
      ],
    ),
  );
  frame.parts.push(group({}, parts));
}

// ---------------------------------------------------------------- legend

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
  marker?: boolean;
}

export function drawLegend(
  frame: Frame,
  entries: LegendEntry[],
  corner: "top-right" | "top-left" | "bottom-left" | "bottom-right" = "top-right",
): void {
  if (entries.length === 0) return;
  const rowH = 16;
  const swatch = 22;
  const pad = 8;
  const textW = Math.max(...entries.map((e) => e.label.length)) * 6.6;
  const boxW = swatch + 6 + textW + 2 * pad;
  const boxH = entries.length * rowH + 2 * pad - 4;
  let bx: number;
  let by: number;
  if (corner === "top-right") {
    bx = frame.left + frame.plotW - boxW - 8;
    by = frame.top + 8;
  } else if (corner === "top-left") {
    bx = frame.left + 8;
    by = frame.top + 8;
  } else if (corner === "bottom-right") {
    bx = frame.left + frame.plotW - boxW - 8;
    by = frame.top + frame.plotH - boxH - 8;
  } else {
    bx = frame.left + 8;
    by = frame.top + frame.plotH - boxH - 8;
  }
  const parts: string[] = [
    el("rect", {
      x: bx,
      y: by,
      width: boxW,
      height: boxH,
      fill: "#ffffff",
      "fill-opacity": 0.85,
      stroke: "#999999",
      "stroke-width": 0.8,
    }),
  ];
  entries.forEach((entry, i) => {
    const cy = by + pad + i * rowH + 4;
    parts.push(
      line(bx + pad, cy, bx + pad + swatch, cy, {
        stroke: entry.color,
        "stroke-width": 2,
        "stroke-dasharray": entry.dash,
      }),
    );
    if (entry.marker) {
      parts.push(
        el("circle", { cx: bx + pad + swatch / 2, cy, r: 2.5, fill: entry.color }),
      );
    }
    parts.push(
      textEl(bx + pad + swatch + 6, cy + 3.5, entry.label, {
        "font-size": 11,
        fill: "#222222",
      }),
    );
  });
  frame.parts.push(group({}, parts));
}
