import { writeFileSync } from "node:fs";
import { groupCdfs } from "./cdf.js";
import { loadRows, resolveInput } from "./csv.js";
import { textWidth as rasterTextWidth } from "./font.js";
import { PdfPage, readPdfSubject } from "./pdf.js";
import { encodePng, readPngTexts } from "./png.js";
import { Framebuffer, type Color } from "./raster.js";
import type { PlotSpec, Series, SeriesPayload } from "./types.js";

export const PAYLOAD_KEY = "cfplot-series";

const BLACK: Color = [0, 0, 0];
const GRAY: Color = [120, 120, 120];
const GRID: Color = [225, 225, 225];
const WHITE: Color = [255, 255, 255];
const PALETTE: Color[] = [
  [31, 119, 180], [255, 127, 14], [44, 160, 44], [214, 39, 40],
  [148, 103, 189], [140, 86, 75], [227, 119, 194], [127, 127, 127],
];

/** The drawing primitives both backends provide (y runs downward). */
interface Surface {
  line(x0: number, y0: number, x1: number, y1: number, c: Color, dash?: number): void;
  polyline(pts: [number, number][], c: Color): void;
  fillRect(x: number, y: number, w: number, h: number, c: Color): void;
  text(x: number, y: number, s: string, c: Color): void;
  textWidth(s: string): number;
}

class PngSurface implements Surface {
  readonly fb: Framebuffer;

  constructor(w: number, h: number) {
    this.fb = new Framebuffer(w, h);
  }

  line(x0: number, y0: number, x1: number, y1: number, c: Color, dash = 0): void {
    this.fb.line(x0, y0, x1, y1, c, dash);
  }

  polyline(pts: [number, number][], c: Color): void {
    for (let i = 1; i < pts.length; i++) {
      this.fb.line(pts[i - 1][0], pts[i - 1][1], pts[i][0], pts[i][1], c);
    }
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    for (let yy = y; yy < y + h; yy++) {
      this.fb.line(x, yy, x + w - 1, yy, c);
    }
  }

  text(x: number, y: number, s: string, c: Color): void {
    this.fb.text(x, y, s, c);
  }

  textWidth(s: string): number {
    return rasterTextWidth(s);
  }
}

class PdfSurface implements Surface {
  constructor(readonly page: PdfPage) {}

  line(x0: number, y0: number, x1: number, y1: number, c: Color, dash = 0): void {
    this.page.line(x0, y0, x1, y1, c, dash);
  }

  polyline(pts: [number, number][], c: Color): void {
    this.page.polyline(pts, c);
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    this.page.fillRect(x, y, w, h, c);
  }

  text(x: number, y: number, s: string, c: Color): void {
    this.page.text(x, y, s, c);
  }

  textWidth(s: string): number {
    return Math.ceil(0.55 * 8 * s.length);
  }
}

// ---------------------------------------------------------------- scales

interface Scale {
  toPx(v: number): number;
  ticks(): { v: number; label: string }[];
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(0).replace("e", "e").replace("+", "");
  }
  const s = v.toPrecision(3);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

function linearScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const toPx = (v: number) => pxLo + ((v - lo) / (hi - lo)) * (pxHi - pxLo);
  return {
    toPx,
    ticks() {
      const span = hi - lo;
      const raw = span / 5;
      const mag = 10 ** Math.floor(Math.log10(raw));
      const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 6)!;
      const out: { v: number; label: string }[] = [];
      for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
        out.push({ v, label: fmt(Math.abs(v) < 1e-12 * span ? 0 : v) });
      }
      return out;
    },
  };
}

function logScale(lo: number, hi: number, pxLo: number, pxHi: number): Scale {
  const llo = Math.floor(Math.log10(lo));
  const lhi = Math.ceil(Math.log10(hi));
  const span = Math.max(lhi - llo, 1);
  const toPx = (v: number) =>
    pxLo + ((Math.log10(v) - llo) / span) * (pxHi - pxLo);
  return {
    toPx,
    ticks() {
      const every = span > 12 ? 2 : 1;
      const out: { v: number; label: string }[] = [];
      for (let e = llo; e <= lhi; e += every) {
        out.push({ v: 10 ** e, label: e === 0 ? "1" : `1e${e}` });
      }
      return out;
    },
  };
}

// ---------------------------------------------------------------- drawing

function drawFigure(s: Surface, spec: PlotSpec, groups: Series[],
                    width: number, height: number): void {
  const left = 56;
  const right = width - 14;
  const top = 22;
  const bottom = height - 40;

  const xsAll = groups.flatMap((g) => g.x);
  if (spec.vline !== undefined) xsAll.push(spec.vline);
  let xmin = Math.min(...xsAll);
  let xmax = Math.max(...xsAll);
  if (spec.logx) {
    // Exact zeros happen (deep-tail error probabilities underflow); the
    // axis spans the positive samples and zeros pin to the left edge at
    // render time — the embedded payload keeps the true values.
    const pos = xsAll.filter((v) => v > 0);
    if (pos.length === 0) {
      throw new Error("logx needs at least one positive sample value");
    }
    xmin = Math.min(...pos);
    xmax = Math.max(...pos);
  }
  const xscale = spec.logx
    ? logScale(xmin, xmax, left, right)
    : linearScale(xmin, xmax, left, right);
  const yscale = linearScale(0, 1, bottom, top);

  // grid + ticks
  for (const t of xscale.ticks()) {
    const px = xscale.toPx(t.v);
    if (px < left - 0.5 || px > right + 0.5) continue;
    s.line(px, top, px, bottom, GRID);
    s.line(px, bottom, px, bottom + 4, BLACK);
    s.text(px - s.textWidth(t.label) / 2, bottom + 8, t.label, BLACK);
  }
  for (let i = 0; i <= 5; i++) {
    const v = i / 5;
    const py = yscale.toPx(v);
    s.line(left, py, right, py, GRID);
    s.line(left - 4, py, left, py, BLACK);
    const label = v === 0 || v === 1 ? String(v) : v.toFixed(1);
    s.text(left - 8 - s.textWidth(label), py - 3, label, BLACK);
  }

  // axes box
  s.line(left, top, right, top, BLACK);
  s.line(left, bottom, right, bottom, BLACK);
  s.line(left, top, left, bottom, BLACK);
  s.line(right, top, right, bottom, BLACK);

  // reference line
  if (spec.vline !== undefined) {
    const px = xscale.toPx(spec.vline);
    s.line(px, top, px, bottom, GRAY, 3);
    const label = fmt(spec.vline);
    s.text(Math.min(px + 4, right - s.textWidth(label)), top + 3, label, GRAY);
  }

  // one step curve per group: flat from the left edge, jump at each sample
  groups.forEach((g, gi) => {
    const c = PALETTE[gi % PALETTE.length];
    const pts: [number, number][] = [];
    const x0 = Math.max(xscale.toPx(g.x[0]), left);
    pts.push([left, yscale.toPx(0)], [x0, yscale.toPx(0)]);
    for (let i = 0; i < g.x.length; i++) {
      const px = Math.min(Math.max(xscale.toPx(g.x[i]), left), right);
      const prev = i === 0 ? 0 : g.y[i - 1];
      pts.push([px, yscale.toPx(prev)], [px, yscale.toPx(g.y[i])]);
    }
    pts.push([right, yscale.toPx(g.y[g.y.length - 1])]);
    s.polyline(pts, c);
  });

  // legend
  const legendW = 26 + Math.max(...groups.map((g) => s.textWidth(g.key)));
  const legendH = 6 + groups.length * 11;
  const lx = left + 8;
  const ly = top + 6;
  s.fillRect(lx, ly, legendW, legendH, WHITE);
  s.line(lx, ly, lx + legendW, ly, GRAY);
  s.line(lx, ly + legendH, lx + legendW, ly + legendH, GRAY);
  s.line(lx, ly, lx, ly + legendH, GRAY);
  s.line(lx + legendW, ly, lx + legendW, ly + legendH, GRAY);
  groups.forEach((g, gi) => {
    const yRow = ly + 5 + gi * 11;
    s.line(lx + 4, yRow + 3, lx + 18, yRow + 3, PALETTE[gi % PALETTE.length]);
    s.text(lx + 22, yRow, g.key, BLACK);
  });

  // labels
  const xlabel = spec.xlabel ?? spec.metric;
  s.text((left + right) / 2 - s.textWidth(xlabel) / 2, height - 14, xlabel, BLACK);
  const ylabel = spec.ylabel ?? "CDF";
  s.text(4, 6, ylabel, BLACK);
}

// ---------------------------------------------------------------- entry

export function buildPayload(spec: PlotSpec, groups: Series[]): SeriesPayload {
  return {
    metric: spec.metric,
    logx: Boolean(spec.logx),
    vline: spec.vline ?? null,
    groups,
  };
}

/**
 * Render the empirical CDFs of one metric, one curve per
 * (strategy, precoder, policy) group, to spec.out. The image embeds the
 * exact plotted series (PNG tEXt chunk / PDF Subject entry) so a stored
 * figure can always be traced back to its numbers.
 */
export function plotCdf(spec: PlotSpec): string {
  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const rows = loadRows(resolveInput(spec.input, spec.metric));
  const groups = groupCdfs(rows, spec.metric, spec.groupBy);
  const payload = JSON.stringify(buildPayload(spec, groups));

  let bytes: Buffer;
  if (spec.out.endsWith(".png")) {
    const surface = new PngSurface(width, height);
    drawFigure(surface, spec, groups, width, height);
    bytes = encodePng(width, height, surface.fb.data, [[PAYLOAD_KEY, payload]]);
  } else if (spec.out.endsWith(".pdf")) {
    const page = new PdfPage(width, height, payload);
    drawFigure(new PdfSurface(page), spec, groups, width, height);
    bytes = page.render();
  } else {
    throw new Error(`output must end in .png or .pdf, got '${spec.out}'`);
  }
  writeFileSync(spec.out, bytes);
  return spec.out;
}

/** Recover the embedded series payload from a rendered image file. */
export function readEmbeddedSeries(image: Buffer): SeriesPayload {
  let text: string;
  if (image.subarray(0, 4).toString("latin1") === "%PDF") {
    text = readPdfSubject(image);
  } else {
    const match = readPngTexts(image).find(([k]) => k === PAYLOAD_KEY);
    if (!match) throw new Error(`no ${PAYLOAD_KEY} text chunk in PNG`);
    text = match[1];
  }
  return JSON.parse(text) as SeriesPayload;
}
