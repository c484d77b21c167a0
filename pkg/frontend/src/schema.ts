/**
 * Parsing and validation of the benchmark CSV schemas.
 *
 * Inputs come exclusively from the exported files of the simulation
 * harness; the column sets below are that documented contract. A missing
 * column or a malformed numeric cell is a hard error, never silently
 * defaulted, and rows violating internal consistency (probability
 * normalization, the binomial error-bar formula) refuse to plot.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

const CLASS_NAMES = ["I", "X", "Z", "Y"] as const;

export interface FailureRow {
  decoder: string;
  code: string;
  d: number;
  p: number;
  alpha_x: number;
  alpha_y: number;
  n: number;
  failures: number;
  p_fail: number;
  sigma: number;
  seed: number;
}

export interface OverlayRow {
  d: number;
  p: number;
  p_fail: number;
}

export interface SweepRow {
  p: number;
  ewd: Record<string, number>;
  all: Record<string, number>;
}

export interface HistogramRow {
  className: string;
  w: number;
  count: number;
}

export interface TimeToLightRow {
  code: string;
  d: number;
  instance: number;
  steps: number; // -1 means the budget ran out
  budget: number;
  seed: number;
}

function parseCsv(path: string): Record<string, string>[] {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`${path}: CSV parse error at row ${e.row}: ${e.message}`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return parsed.data;
}

function requireColumns(path: string, rows: Record<string, string>[], cols: string[]) {
  const have = new Set(Object.keys(rows[0]));
  const missing = cols.filter((c) => !have.has(c));
  if (missing.length > 0) {
    throw new SchemaError(`${path}: missing required columns: ${missing.join(", ")}`);
  }
}

function num(path: string, row: Record<string, string>, col: string): number {
  const raw = row[col];
  const v = raw === "inf" ? Infinity : Number(raw);
  if (raw === undefined || raw === "" || Number.isNaN(v)) {
    throw new SchemaError(`${path}: column ${col}: bad numeric value ${JSON.stringify(raw)}`);
  }
  return v;
}

export function readFailureCsv(path: string): FailureRow[] {
  const rows = parseCsv(path);
  const cols = [
    "decoder", "code", "d", "p", "alpha_x", "alpha_y",
    "n", "failures", "p_fail", "sigma", "seed",
  ];
  requireColumns(path, rows, cols);
  const out = rows.map((r) => ({
    decoder: r.decoder,
    code: r.code,
    d: num(path, r, "d"),
    p: num(path, r, "p"),
    alpha_x: num(path, r, "alpha_x"),
    alpha_y: num(path, r, "alpha_y"),
    n: num(path, r, "n"),
    failures: num(path, r, "failures"),
    p_fail: num(path, r, "p_fail"),
    sigma: num(path, r, "sigma"),
    seed: num(path, r, "seed"),
  }));
  for (const r of out) {
    const pf = r.failures / r.n;
    if (Math.abs(pf - r.p_fail) > 1e-9) {
      throw new SchemaError(
        `${path}: d=${r.d} p=${r.p}: p_fail ${r.p_fail} != failures/n ${pf}`,
      );
    }
    const sigma = Math.sqrt((pf * (1 - pf)) / r.n);
    if (Math.abs(sigma - r.sigma) > 1e-9) {
      throw new SchemaError(
        `${path}: d=${r.d} p=${r.p}: sigma ${r.sigma} violates the binomial formula (${sigma})`,
      );
    }
  }
  return out;
}

export function readOverlayCsv(path: string): OverlayRow[] {
  const rows = parseCsv(path);
  requireColumns(path, rows, ["d", "p", "p_fail"]);
  return rows.map((r) => ({
    d: num(path, r, "d"),
    p: num(path, r, "p"),
    p_fail: num(path, r, "p_fail"),
  }));
}

export function readSweepCsv(path: string): SweepRow[] {
  const rows = parseCsv(path);
  const cols = ["p"];
  for (const mode of ["ewd", "all"]) {
    for (const c of CLASS_NAMES) cols.push(`${mode}_${c}`);
  }
  requireColumns(path, rows, cols);
  const out: SweepRow[] = rows.map((r) => {
    const ewd: Record<string, number> = {};
    const all: Record<string, number> = {};
    for (const c of CLASS_NAMES) {
      ewd[c] = num(path, r, `ewd_${c}`);
      all[c] = num(path, r, `all_${c}`);
    }
    return { p: num(path, r, "p"), ewd, all };
  });
  for (const row of out) {
    for (const mode of ["ewd", "all"] as const) {
      const total = CLASS_NAMES.reduce((acc, c) => acc + row[mode][c], 0);
      if (Math.abs(total - 1) > 1e-9) {
        throw new SchemaError(
          `${path}: p=${row.p}: ${mode} probabilities sum to ${total}, expected 1`,
        );
      }
    }
  }
  return out;
}

export function readHistogramCsv(path: string): HistogramRow[] {
  const rows = parseCsv(path);
  requireColumns(path, rows, ["class", "w", "count"]);
  return rows.map((r) => {
    const className = r["class"];
    if (!CLASS_NAMES.includes(className as (typeof CLASS_NAMES)[number])) {
      throw new SchemaError(`${path}: unknown class ${JSON.stringify(className)}`);
    }
    return { className, w: num(path, r, "w"), count: num(path, r, "count") };
  });
}

export function readTimeToLightCsv(path: string): TimeToLightRow[] {
  const rows = parseCsv(path);
  requireColumns(path, rows, ["code", "d", "instance", "steps", "budget", "seed"]);
  return rows.map((r) => ({
    code: r.code,
    d: num(path, r, "d"),
    instance: num(path, r, "instance"),
    steps: num(path, r, "steps"),
    budget: num(path, r, "budget"),
    seed: num(path, r, "seed"),
  }));
}

/** Order-statistic percentile with exhausted runs counting as +inf. */
export function percentile(steps: number[], q: number): number {
  const vals = steps.map((s) => (s < 0 ? Infinity : s)).sort((a, b) => a - b);
  const rank = Math.min(vals.length - 1, Math.max(0, Math.ceil((q / 100) * vals.length) - 1));
  return vals[rank];
}
