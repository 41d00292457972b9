import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { plotCdf, readEmbeddedSeries } from "../src/render.js";
import type { SeriesPayload } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

/**
 * Golden check: the fixed 20-row input must plot to images whose embedded
 * data series match the stored reference exactly — any change to sorting,
 * step construction, grouping, or the embedding itself trips this.
 */
describe("golden reference", () => {
  const input = join(FIXTURES, "golden-input.csv");
  const golden = JSON.parse(
    readFileSync(join(FIXTURES, "golden-series.json"), "utf-8"),
  ) as SeriesPayload;

  it("PNG series match the stored reference exactly", () => {
    const out = join(mkdtempSync(join(tmpdir(), "cfplot-gold-")), "g.png");
    plotCdf({ input, metric: "sum_se", out });
    expect(readEmbeddedSeries(readFileSync(out))).toEqual(golden);
  });

  it("PDF series match the stored reference exactly", () => {
    const out = join(mkdtempSync(join(tmpdir(), "cfplot-gold-")), "g.pdf");
    plotCdf({ input, metric: "sum_se", out });
    expect(readEmbeddedSeries(readFileSync(out))).toEqual(golden);
  });
});
