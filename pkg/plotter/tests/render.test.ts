import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeAll, describe, expect, it } from "vitest";
import { plotCdf, readEmbeddedSeries } from "../src/render.js";

const HEADER = "drop,ue,class,strategy,precoder,policy,metric,value,seed";

let dir: string;

function epsCsv(values: number[]): string {
  const path = join(dir, `eps-${values.length}-${values[0]}.csv`);
  const lines = values.map(
    (v, i) => `0,${i},urllc,SPC,LP-MMSE,FPA,eps,${v},m1/d0`);
  writeFileSync(path, [HEADER, ...lines].join("\n"));
  return path;
}

beforeAll(() => {
  dir = mkdtempSync(join(tmpdir(), "cfplot-render-"));
});

describe("plotCdf", () => {
  it("writes a structurally valid PNG that carries its own series", () => {
    const input = epsCsv([1e-3, 2e-3, 5e-4, 7e-3]);
    const out = join(dir, "a.png");
    plotCdf({ input, metric: "eps", out });
    const png = readFileSync(out);
    expect([...png.subarray(0, 4)]).toEqual([137, 80, 78, 71]);
    expect(png.readUInt32BE(16)).toBe(720);   // IHDR width
    expect(png.readUInt32BE(20)).toBe(480);   // IHDR height
    const payload = readEmbeddedSeries(png);
    expect(payload.metric).toBe("eps");
    expect(payload.groups).toHaveLength(1);
    expect(payload.groups[0].x).toEqual([5e-4, 1e-3, 2e-3, 7e-3]);
    expect(payload.groups[0].y).toEqual([0.25, 0.5, 0.75, 1.0]);
  });

  it("writes the same series into a vector PDF", () => {
    const input = epsCsv([1e-3, 2e-3, 5e-4, 7e-3]);
    const png = join(dir, "b.png");
    const pdf = join(dir, "b.pdf");
    plotCdf({ input, metric: "eps", out: png });
    plotCdf({ input, metric: "eps", out: pdf });
    const bytes = readFileSync(pdf);
    expect(bytes.subarray(0, 5).toString()).toBe("%PDF-");
    expect(readEmbeddedSeries(bytes)).toEqual(
      readEmbeddedSeries(readFileSync(png)));
  });

  it("is byte-deterministic across reruns", () => {
    const input = epsCsv([1e-5, 1e-4, 1e-2, 0.3]);
    const out1 = join(dir, "d1.png");
    const out2 = join(dir, "d2.png");
    plotCdf({ input, metric: "eps", out: out1, logx: true, vline: 1e-3 });
    plotCdf({ input, metric: "eps", out: out2, logx: true, vline: 1e-3 });
    expect(readFileSync(out1).equals(readFileSync(out2))).toBe(true);
  });

  it("supports a log x axis over ten decades and records it", () => {
    const input = epsCsv([1e-10, 1e-7, 1e-4, 1e-1, 1.0]);
    const out = join(dir, "log.png");
    plotCdf({ input, metric: "eps", out, logx: true, vline: 1e-5 });
    const payload = readEmbeddedSeries(readFileSync(out));
    expect(payload.logx).toBe(true);
    expect(payload.vline).toBe(1e-5);
  });

  it("keeps exact-zero samples in the payload under logx (render pins them)", () => {
    const input = epsCsv([0, 1e-3]);
    const out = join(dir, "zero.png");
    plotCdf({ input, metric: "eps", out, logx: true });
    const payload = readEmbeddedSeries(readFileSync(out));
    expect(payload.groups[0].x).toEqual([0, 1e-3]);
  });

  it("still refuses a log axis when no sample is positive", () => {
    const input = epsCsv([0]);
    expect(() => plotCdf({ input, metric: "eps",
                           out: join(dir, "x.png"), logx: true }))
      .toThrow(/at least one positive/);
  });

  it("rejects unknown output formats", () => {
    const input = epsCsv([1e-3, 1e-2]);
    expect(() => plotCdf({ input, metric: "eps", out: join(dir, "x.svg") }))
      .toThrow(/must end in \.png or \.pdf/);
  });
});
