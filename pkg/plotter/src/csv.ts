import { readFileSync, existsSync, statSync } from "node:fs";
import { join } from "node:path";
import Papa from "papaparse";
import type { Row } from "./types.js";

export const EXPECTED_COLUMNS = [
  "drop", "ue", "class", "strategy", "precoder", "policy",
  "metric", "value", "seed",
] as const;

/** Metrics that live in blocks.csv rather than results.csv. */
const BLOCK_METRICS = new Set(["sum_se"]);

/**
 * Parse one CSV file, insisting on the full simulator schema. A wrong or
 * renamed header fails by naming the missing column rather than producing
 * empty curves downstream.
 */
export function loadRows(path: string): Row[] {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: malformed CSV (${e.message} at row ${e.row})`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of EXPECTED_COLUMNS) {
    if (!fields.includes(col)) {
      throw new Error(
        `${path}: missing column '${col}' (found: ${fields.join(", ")})`);
    }
  }
  return parsed.data.map((r) => ({
    drop: Number(r.drop),
    ue: Number(r.ue),
    class: r.class,
    strategy: r.strategy,
    precoder: r.precoder,
    policy: r.policy,
    metric: r.metric,
    value: Number(r.value),
    seed: r.seed,
  }));
}

/**
 * Resolve a PlotSpec input to the CSV carrying the requested metric: a file
 * path is used as-is; a run directory selects blocks.csv for per-block
 * metrics and results.csv otherwise.
 */
export function resolveInput(input: string, metric: string): string {
  if (existsSync(input) && statSync(input).isFile()) return input;
  const name = BLOCK_METRICS.has(metric) ? "blocks.csv" : "results.csv";
  const path = join(input, name);
  if (!existsSync(path)) {
    throw new Error(`no ${name} under '${input}'`);
  }
  return path;
}
