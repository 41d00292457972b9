import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";
import { loadRows, resolveInput } from "../src/csv.js";

const HEADER = "drop,ue,class,strategy,precoder,policy,metric,value,seed";

let dir: string;

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), "cfplot-csv-"));
  writeFileSync(join(dir, "results.csv"), [
    HEADER,
    "0,38,urllc,SPC,MR,FPA,eps,1e-06,m1/d0",
    "0,39,urllc,SPC,MR,FPA,eps,0.004,m1/d0",
  ].join("\n"));
  writeFileSync(join(dir, "blocks.csv"), [
    HEADER,
    "0,0,block,SPC,MR,FPA,sum_se,12.5,m1/d0",
  ].join("\n"));
});

describe("loadRows", () => {
  it("parses the simulator schema with numeric fields converted", () => {
    const rows = loadRows(join(dir, "results.csv"));
    expect(rows).toHaveLength(2);
    expect(rows[0]).toMatchObject({
      drop: 0, ue: 38, class: "urllc", metric: "eps", value: 1e-6,
      seed: "m1/d0",
    });
  });

  it("fails naming the missing column on a foreign header", () => {
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "drop,ue,class,strategy,precoder,policy,METRIC,value,seed\n" +
      "0,0,block,SPC,MR,FPA,sum_se,1.0,m1/d0");
    expect(() => loadRows(bad)).toThrow(/missing column 'metric'.*METRIC/);
  });
});

describe("resolveInput", () => {
  it("routes per-block metrics to blocks.csv and the rest to results.csv", () => {
    expect(resolveInput(dir, "sum_se")).toBe(join(dir, "blocks.csv"));
    expect(resolveInput(dir, "eps")).toBe(join(dir, "results.csv"));
  });

  it("accepts a direct file path unchanged", () => {
    const f = join(dir, "results.csv");
    expect(resolveInput(f, "eps")).toBe(f);
  });

  it("reports a missing file by name", () => {
    expect(() => resolveInput(join(dir, "nowhere"), "eps"))
      .toThrow(/no results\.csv under/);
  });
});
