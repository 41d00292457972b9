import { describe, expect, it } from "vitest";
import { empiricalCdf, groupCdfs } from "../src/cdf.js";
import type { Row } from "../src/types.js";

function row(over: Partial<Row>): Row {
  return {
    drop: 0, ue: 0, class: "block", strategy: "SPC", precoder: "MR",
    policy: "FPA", metric: "sum_se", value: 1.0, seed: "m1/d0", ...over,
  };
}

describe("empiricalCdf", () => {
  it("sorts the samples and steps by 1/n up to exactly 1", () => {
    const { x, y } = empiricalCdf([3.0, 1.0, 2.0, 2.5]);
    expect(x).toEqual([1.0, 2.0, 2.5, 3.0]);
    expect(y).toEqual([0.25, 0.5, 0.75, 1.0]);
  });

  it("keeps duplicate samples as repeated steps", () => {
    const { x, y } = empiricalCdf([2.0, 2.0, 1.0]);
    expect(x).toEqual([1.0, 2.0, 2.0]);
    expect(y[2]).toBe(1.0);
  });

  it("rejects an empty sample", () => {
    expect(() => empiricalCdf([])).toThrow(/empty/);
  });
});

describe("groupCdfs", () => {
  it("builds one curve per group, each reaching 1.0", () => {
    const rows: Row[] = [];
    for (let i = 0; i < 10; i++) {
      rows.push(row({ ue: i, value: 10 + i }));
      rows.push(row({ ue: i, precoder: "LP-MMSE", value: 25 + i }));
    }
    const series = groupCdfs(rows, "sum_se");
    expect(series.map((s) => s.key)).toEqual(["SPC/MR/FPA", "SPC/LP-MMSE/FPA"]);
    for (const s of series) {
      expect(s.x).toHaveLength(10);
      expect(s.y[9]).toBe(1.0);
      expect([...s.x]).toEqual([...s.x].sort((a, b) => a - b));
    }
  });

  it("ignores rows of other metrics (excluded eps markers stay out)", () => {
    const rows = [
      row({ class: "urllc", metric: "eps", value: 1e-6 }),
      row({ class: "urllc", metric: "eps", value: 1e-4 }),
      row({ class: "urllc", metric: "eps_excluded", value: 1.0 }),
    ];
    const series = groupCdfs(rows, "eps");
    expect(series).toHaveLength(1);
    expect(series[0].x).toEqual([1e-6, 1e-4]);
  });

  it("names the available metrics when the requested one is missing", () => {
    expect(() => groupCdfs([row({})], "latency"))
      .toThrow(/metric 'latency' not found.*sum_se/);
  });

  it("honors a custom group-by", () => {
    const rows = [
      row({ strategy: "SPC", value: 1 }),
      row({ strategy: "NPu", value: 2 }),
    ];
    const series = groupCdfs(rows, "sum_se", ["strategy"]);
    expect(series.map((s) => s.key)).toEqual(["SPC", "NPu"]);
  });
});
