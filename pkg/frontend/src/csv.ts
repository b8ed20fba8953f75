// CSV loading and schema validation. The plotting scripts are read-only
// consumers of the solver CLI's CSV files; every column is checked against
// the documented schema before anything is drawn, and a mismatch is a hard
// error that names the offending column.

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";

export class UsageError extends Error {}
export class SchemaError extends Error {}
export class DataError extends Error {}

// Number columns arrive as strings; require a finite decimal literal.
const finite = z
  .string({ message: "missing column" })
  .refine((s) => s.trim() !== "" && Number.isFinite(Number(s)), {
    message: "not a finite number",
  })
  .transform(Number);

const integer = finite.refine(Number.isInteger, { message: "not an integer" });

const name = z.string({ message: "missing column" }).min(1, { message: "empty value" });

export const convergenceRowSchema = z.object({
  iter: integer,
  relative_residual: finite,
  operator: name,
});
export type ConvergenceRow = z.infer<typeof convergenceRowSchema>;

export const spectrumRowSchema = z.object({
  mode_index: integer,
  re: finite,
  im: finite,
  operator: name,
  D: integer,
});
export type SpectrumRow = z.infer<typeof spectrumRowSchema>;

export const polesRowSchema = z.object({
  n: integer,
  i: integer,
  c0: finite,
  a_i: finite,
  b_i: finite,
  sqrt_b_i: finite,
});
export type PolesRow = z.infer<typeof polesRowSchema>;

// Sweep tables share `operator` and `iterations` (NA when a cell failed to
// converge) and differ in the x column: D or l_over_lambda.
const iterationsCell = z.union([z.literal("NA"), integer], {
  message: "not an integer or NA",
});

export const subdomainSweepRowSchema = z.object({
  D: integer,
  operator: name,
  iterations: iterationsCell,
});
export const ratioSweepRowSchema = z.object({
  l_over_lambda: finite,
  operator: name,
  iterations: iterationsCell,
});
export type SweepRow = {
  x: number;
  operator: string;
  iterations: number | "NA";
};

export const symbolsRowSchema = z.object({
  s: finite,
  s_over_k: finite,
  re: finite,
  im: finite,
  branch: name,
  operator: name,
});
export type SymbolsRow = z.infer<typeof symbolsRowSchema>;

export const radiusRowSchema = z.object({
  s: finite,
  s_over_k: finite,
  rho_abs: finite,
  branch: name,
  operator: name,
});
export type RadiusRow = z.infer<typeof radiusRowSchema>;

// ------------------------------------------------------------------ load

export interface RawTable {
  fields: string[];
  rows: Array<Record<string, string>>;
}

export function readTable(path: string): RawTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new UsageError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: "greedy",
  });
  for (const e of parsed.errors) {
    // Papaparse reports ragged rows and similar structural damage here.
    if (e.code === "TooFewFields" || e.code === "TooManyFields") {
      throw new SchemaError(`${path}: row ${(e.row ?? 0) + 2}: ${e.message}`);
    }
  }
  const fields = parsed.meta.fields ?? [];
  if (fields.length === 0) throw new SchemaError(`${path}: no header row`);
  return { fields, rows: parsed.data };
}

export function validateRows<T>(table: RawTable, schema: z.ZodType<T>, kind: string): T[] {
  return table.rows.map((raw, index) => {
    const result = schema.safeParse(raw);
    if (!result.success) {
      const issue = result.error.issues[0];
      const column = issue && issue.path.length > 0 ? String(issue.path[0]) : "(row)";
      const detail = issue ? issue.message : "invalid row";
      throw new SchemaError(
        `${kind} CSV row ${index + 2}: column "${column}": ${detail}`,
      );
    }
    return result.data;
  });
}

export function loadConvergence(path: string): ConvergenceRow[] {
  return validateRows(readTable(path), convergenceRowSchema, "convergence");
}

export function loadSpectrum(path: string): SpectrumRow[] {
  return validateRows(readTable(path), spectrumRowSchema, "spectrum");
}

export function loadPoles(path: string): PolesRow[] {
  return validateRows(readTable(path), polesRowSchema, "pade-table");
}

// Accepts either sweep flavor and reports which x column it found.
export function loadSweep(path: string): { xKey: "D" | "l_over_lambda"; rows: SweepRow[] } {
  const table = readTable(path);
  if (table.fields.includes("D")) {
    const rows = validateRows(table, subdomainSweepRowSchema, "sweep-d");
    return {
      xKey: "D",
      rows: rows.map((r) => ({ x: r.D, operator: r.operator, iterations: r.iterations })),
    };
  }
  if (table.fields.includes("l_over_lambda")) {
    const rows = validateRows(table, ratioSweepRowSchema, "sweep-k");
    return {
      xKey: "l_over_lambda",
      rows: rows.map((r) => ({
        x: r.l_over_lambda,
        operator: r.operator,
        iterations: r.iterations,
      })),
    };
  }
  throw new SchemaError(
    `${path}: column "D" or "l_over_lambda": missing (not an iteration-sweep CSV)`,
  );
}

// Accepts symbol tables (re, im) and radius tables (rho_abs).
export type SymbolsOrRadius =
  | { kind: "symbols"; rows: SymbolsRow[] }
  | { kind: "radius"; rows: RadiusRow[] };

export function loadSymbolsOrRadius(path: string): SymbolsOrRadius {
  const table = readTable(path);
  if (table.fields.includes("rho_abs")) {
    return { kind: "radius", rows: validateRows(table, radiusRowSchema, "radius") };
  }
  if (table.fields.includes("re") && table.fields.includes("im")) {
    return { kind: "symbols", rows: validateRows(table, symbolsRowSchema, "symbols") };
  }
  throw new SchemaError(
    `${path}: column "re"/"im" or "rho_abs": missing (not a symbols or radius CSV)`,
  );
}

// ----------------------------------------------------------------- misc

export function groupBy<T>(rows: T[], key: (row: T) => string): Map<string, T[]> {
  const groups = new Map<string, T[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) bucket.push(row);
    else groups.set(k, [row]);
  }
  return groups;
}
