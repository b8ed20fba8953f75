import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";
import { main as convergenceMain } from "../src/plot_convergence.js";
import { main as spectrumMain } from "../src/plot_spectrum.js";
import { main as polesMain } from "../src/plot_poles.js";
import { main as iterationsMain } from "../src/plot_iterations.js";
import { main as symbolsMain } from "../src/plot_symbols.js";

const F = new URL("./fixtures/", import.meta.url).pathname;

let out: string;
beforeAll(() => {
  out = mkdtempSync(join(tmpdir(), "plots-"));
  vi.spyOn(console, "error").mockImplementation(() => {});
});
afterAll(() => {
  rmSync(out, { recursive: true, force: true });
  vi.restoreAllMocks();
});

describe("exit codes mirror the solver CLI", () => {
  it("0 on success for every script", () => {
    expect(convergenceMain([F + "convergence.csv", "-o", join(out, "c.svg")])).toBe(0);
    expect(spectrumMain([F + "spectrum.csv", "-o", join(out, "s.svg")])).toBe(0);
    expect(polesMain([F + "poles.csv", "--guides", "-o", join(out, "p.svg")])).toBe(0);
    expect(iterationsMain([F + "sweep_d.csv", "-o", join(out, "i.svg")])).toBe(0);
    expect(symbolsMain([F + "symbols.csv", "-o", join(out, "y.svg")])).toBe(0);
  });

  it("2 when the input path is missing or unreadable", () => {
    expect(convergenceMain([])).toBe(2);
    expect(convergenceMain([F + "convergence.csv", F + "poles.csv"])).toBe(2);
    expect(convergenceMain([join(out, "does-not-exist.csv")])).toBe(2);
  });

  it("2 on unknown flags and bad flag values", () => {
    expect(convergenceMain([F + "convergence.csv", "--bogus"])).toBe(2);
    expect(spectrumMain([F + "spectrum.csv", "--zoom", "-3"])).toBe(2);
    expect(polesMain([F + "poles.csv", "--poles", "nope"])).toBe(2);
  });

  it("2 on schema mismatch", () => {
    expect(convergenceMain([F + "spectrum.csv", "-o", join(out, "x.svg")])).toBe(2);
    expect(convergenceMain([F + "bad_number.csv"])).toBe(2);
    expect(iterationsMain([F + "convergence.csv"])).toBe(2);
    expect(symbolsMain([F + "sweep_d.csv"])).toBe(2);
  });

  it("3 on data that cannot be drawn", () => {
    expect(convergenceMain([F + "empty.csv"])).toBe(3);
    expect(iterationsMain([F + "sweep_all_na.csv"])).toBe(3);
  });
});
