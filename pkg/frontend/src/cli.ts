// Shared command-line harness. Every script is invoked the same way:
//
//     plot-<kind> input.csv -o figure.svg [figure flags]
//
// and exit codes mirror the solver CLI: 0 ok, 2 bad invocation or schema
// mismatch, 3 data that cannot be drawn (empty, all filtered out).

import { realpathSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { DataError, SchemaError, UsageError } from "./csv.js";

export type FigureKind = "convergence" | "spectrum" | "poles" | "iterations" | "symbols";

export interface PlotJob {
  input: string;
  kind: FigureKind;
  output?: string; // stdout when omitted
  logY: boolean;
  zoom?: number; // spectrum: half-width of the view around (1, 0)
  guides: boolean; // poles: draw the (i+1)*pi asymptote guides
  slope: boolean; // iterations: draw the 2D reference slope
  poleCount: number; // poles: how many pole indices to plot
}

const FLAG_HELP: Record<FigureKind, string> = {
  convergence: "",
  spectrum: "  [--zoom W]       restrict the view to (1, 0) +/- W data units",
  poles:
    "  [--guides]       draw horizontal (i+1)*pi guide lines\n" +
    "  [--poles N]      number of pole indices to plot (default 6)",
  iterations:
    "  [--no-slope]     omit the 2D reference slope overlay\n" +
    "  [--log-y]        logarithmic y axis",
  symbols: "  [--log-y]        logarithmic y axis (default for radius tables)",
};

export function usage(kind: FigureKind): string {
  const extra = FLAG_HELP[kind];
  return (
    `usage: plot-${kind} input.csv [-o figure.svg]\n` +
    `  [-o, --output F] write the SVG to F instead of stdout\n` +
    (extra ? extra + "\n" : "")
  );
}

function tryParseArgs(argv: string[], kind: FigureKind) {
  try {
    return parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        output: { type: "string", short: "o" },
        zoom: { type: "string" },
        guides: { type: "boolean" },
        poles: { type: "string" },
        "no-slope": { type: "boolean" },
        "log-y": { type: "boolean" },
      },
    });
  } catch (err) {
    throw new UsageError(`${(err as Error).message}\n${usage(kind)}`);
  }
}

export function parseJob(argv: string[], kind: FigureKind): PlotJob {
  const { values, positionals } = tryParseArgs(argv, kind);
  if (positionals.length !== 1) {
    throw new UsageError(`expected exactly one input CSV path\n${usage(kind)}`);
  }
  let zoom: number | undefined;
  if (values.zoom !== undefined) {
    zoom = Number(values.zoom);
    if (!Number.isFinite(zoom) || zoom <= 0) {
      throw new UsageError(`--zoom needs a positive number, got "${values.zoom}"`);
    }
  }
  let poleCount = 6;
  if (values.poles !== undefined) {
    poleCount = Number(values.poles);
    if (!Number.isInteger(poleCount) || poleCount < 1) {
      throw new UsageError(`--poles needs a positive integer, got "${values.poles}"`);
    }
  }
  return {
    input: positionals[0]!,
    kind,
    output: values.output,
    logY: values["log-y"] ?? false,
    zoom,
    guides: values.guides ?? false,
    slope: !(values["no-slope"] ?? false),
    poleCount,
  };
}

export function writeSvg(svg: string, output: string | undefined): void {
  if (output === undefined) {
    process.stdout.write(svg);
    return;
  }
  writeFileSync(output, svg);
}

export function runPlot(
  argv: string[],
  kind: FigureKind,
  build: (job: PlotJob) => string,
): number {
  try {
    const job = parseJob(argv, kind);
    writeSvg(build(job), job.output);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError) {
      console.error(`plot-${kind}: error: ${err.message}`);
      return 2;
    }
    if (err instanceof DataError) {
      console.error(`plot-${kind}: error: ${err.message}`);
      return 3;
    }
    throw err;
  }
}

// True when the module is the process entry point (direct node invocation
// or an npm bin shim); false when imported by tests.
export function isEntry(metaUrl: string): boolean {
  const arg = process.argv[1];
  if (!arg) return false;
  try {
    return metaUrl === pathToFileURL(realpathSync(arg)).href;
  } catch {
    return false;
  }
}
