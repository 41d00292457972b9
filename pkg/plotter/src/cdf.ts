import type { Row, Series } from "./types.js";

/**
 * Empirical CDF at the sorted sample points: y[i] = (i+1)/n, so the last
 * point always reaches exactly 1. Step function, no smoothing.
 */
export function empiricalCdf(values: number[]): { x: number[]; y: number[] } {
  if (values.length === 0) throw new Error("empty sample");
  const x = [...values].sort((a, b) => a - b);
  const n = x.length;
  const y = x.map((_, i) => (i + 1) / n);
  return { x, y };
}

const DEFAULT_GROUP_BY: (keyof Row)[] = ["strategy", "precoder", "policy"];

/**
 * Pool the rows of one metric into per-group samples and build one CDF per
 * group, ordered by first appearance in the file. Rows of other metrics are
 * ignored (in particular, excluded-link markers never enter an "eps" curve).
 */
export function groupCdfs(
  rows: Row[], metric: string, groupBy: (keyof Row)[] = DEFAULT_GROUP_BY,
): Series[] {
  const samples = new Map<string, number[]>();
  for (const r of rows) {
    if (r.metric !== metric) continue;
    const key = groupBy.map((f) => String(r[f])).join("/");
    let bucket = samples.get(key);
    if (!bucket) samples.set(key, (bucket = []));
    bucket.push(r.value);
  }
  if (samples.size === 0) {
    const seen = [...new Set(rows.map((r) => r.metric))].sort().join(", ");
    throw new Error(`metric '${metric}' not found (file has: ${seen})`);
  }
  return [...samples.entries()].map(([key, vals]) => {
    const { x, y } = empiricalCdf(vals);
    return { key, x, y };
  });
}
