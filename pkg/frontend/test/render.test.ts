import { describe, expect, it } from "vitest";
import { DataError, UsageError, groupBy, loadConvergence, loadPoles, loadSpectrum, loadSweep, loadSymbolsOrRadius } from "../src/csv.js";
import { newFrame } from "../src/chart.js";
import { parseJob } from "../src/cli.js";
import { render as renderConvergence } from "../src/plot_convergence.js";
import { render as renderSpectrum, spectrumView } from "../src/plot_spectrum.js";
import { render as renderPoles } from "../src/plot_poles.js";
import { render as renderIterations } from "../src/plot_iterations.js";
import { render as renderSymbols } from "../src/plot_symbols.js";

const F = new URL("./fixtures/", import.meta.url).pathname;

const count = (svg: string, needle: RegExp): number => (svg.match(needle) ?? []).length;

describe("plot_convergence", () => {
  const rows = loadConvergence(F + "convergence.csv");

  it("draws one curve per operator", () => {
    const svg = renderConvergence(rows);
    expect(count(svg, /<path /g)).toBe(6);
    const one = rows.filter((r) => r.operator === "oo0-u");
    expect(count(renderConvergence(one), /<path /g)).toBe(1);
  });

  it("sorts the legend by final residual", () => {
    const finals = new Map<string, number>();
    for (const [op, block] of groupBy(rows, (r) => r.operator)) {
      const sorted = [...block].sort((a, b) => a.iter - b.iter);
      finals.set(op, sorted[sorted.length - 1]!.relative_residual);
    }
    const expected = [...finals.entries()].sort((a, b) => a[1] - b[1]).map((e) => e[0]);
    const svg = renderConvergence(rows);
    const positions = expected.map((op) => svg.indexOf(`>${op}<`));
    expect(positions.every((p) => p >= 0)).toBe(true);
    for (let i = 1; i < positions.length; i += 1) {
      expect(positions[i]!).toBeGreaterThan(positions[i - 1]!);
    }
  });

  it("refuses empty data", () => {
    expect(() => renderConvergence([])).toThrow(DataError);
  });
});

describe("plot_spectrum", () => {
  const rows = loadSpectrum(F + "spectrum.csv");

  it("scatters every eigenvalue and draws the reference circle", () => {
    const svg = renderSpectrum(rows);
    // 1200 eigenvalue dots + 1 reference circle + 2 legend markers.
    expect(count(svg, /<circle /g)).toBe(1203);
    expect(count(svg, /stroke-dasharray="5,4"/g)).toBe(1);
  });

  it("enforces equal aspect: same data units per pixel on both axes", () => {
    const frame = newFrame("probe");
    for (const zoom of [undefined, 0.01]) {
      const v = spectrumView(rows, frame, zoom);
      const xPerPx = (v.x1 - v.x0) / frame.plotW;
      const yPerPx = (v.y1 - v.y0) / frame.plotH;
      expect(Math.abs(xPerPx - yPerPx)).toBeLessThan(1e-12 * xPerPx);
      expect(Math.abs(xPerPx - v.unitsPerPx)).toBeLessThan(1e-12 * xPerPx);
    }
  });

  it("zooms around (1, 0)", () => {
    const frame = newFrame("probe");
    const v = spectrumView(rows, frame, 0.01);
    expect((v.x0 + v.x1) / 2).toBeCloseTo(1, 12);
    expect((v.y0 + v.y1) / 2).toBeCloseTo(0, 12);
    expect(v.x1 - v.x0).toBeLessThan(0.05);
  });

  it("refuses empty data", () => {
    expect(() => renderSpectrum([])).toThrow(DataError);
  });
});

describe("plot_poles", () => {
  const rows = loadPoles(F + "poles.csv");
  const job = (extra: string[]) => parseJob([F + "poles.csv", ...extra], "poles");

  it("draws six pole curves, plain without the guide option", () => {
    const svg = renderPoles(rows, job([]));
    expect(count(svg, /<path /g)).toBe(6);
    expect(count(svg, /stroke-dasharray="6,4"/g)).toBe(0);
  });

  it("draws one guide per pole index with --guides", () => {
    const svg = renderPoles(rows, job(["--guides"]));
    expect(count(svg, /stroke-dasharray="6,4"/g)).toBe(6);
    expect(svg).toContain(">6π<");
  });

  it("honours --poles", () => {
    const svg = renderPoles(rows, job(["--poles", "3", "--guides"]));
    expect(count(svg, /<path /g)).toBe(3);
    expect(count(svg, /stroke-dasharray="6,4"/g)).toBe(3);
  });
});

describe("plot_iterations", () => {
  it("overlays the 2D reference slope on subdomain sweeps", () => {
    const svg = renderIterations(loadSweep(F + "sweep_d.csv"));
    expect(count(svg, /stroke-dasharray="7,4"/g)).toBeGreaterThanOrEqual(1);
    expect(svg).toContain("2D reference");
  });

  it("omits the slope with --no-slope and for ratio sweeps", () => {
    const job = parseJob([F + "sweep_d.csv", "--no-slope"], "iterations");
    expect(renderIterations(loadSweep(F + "sweep_d.csv"), job)).not.toContain("2D reference");
    expect(renderIterations(loadSweep(F + "sweep_k.csv"))).not.toContain("2D reference");
  });

  it("skips NA cells and whole-NA operators", () => {
    const svg = renderIterations(loadSweep(F + "sweep_na.csv"));
    // op-a keeps two of three cells; op-b is entirely NA and disappears.
    expect(count(svg, /<path /g)).toBe(1);
    expect(svg).not.toContain("op-b");
  });

  it("refuses a sweep where nothing converged", () => {
    expect(() => renderIterations(loadSweep(F + "sweep_all_na.csv"))).toThrow(DataError);
  });
});

describe("plot_symbols", () => {
  it("draws solid Re and dashed Im curves per operator", () => {
    const svg = renderSymbols(loadSymbolsOrRadius(F + "symbols.csv"));
    // Three operators, a Re and an Im path each (the legend swatches are
    // <line> elements, so the dashed-path count sees only the Im curves).
    expect(count(svg, /<path /g)).toBe(6);
    expect(count(svg, /<path [^>]*stroke-dasharray="5,3"/g)).toBe(3);
  });

  it("plots radius tables on a log axis and drops exact zeros", () => {
    const svg = renderSymbols(loadSymbolsOrRadius(F + "radius.csv"));
    expect(count(svg, /<path /g)).toBe(3);
    expect(svg).toContain(">1e-");
    const tiny = renderSymbols(loadSymbolsOrRadius(F + "radius_zero.csv"));
    // The rho_abs = 0 row is dropped; the two positive points survive.
    expect(tiny).toContain("1e-30");
  });

  it("rejects --log-y on signed symbol tables", () => {
    const job = parseJob([F + "symbols.csv", "--log-y"], "symbols");
    expect(() => renderSymbols(loadSymbolsOrRadius(F + "symbols.csv"), job)).toThrow(
      UsageError,
    );
  });
});
