import { GLYPH_H, GLYPH_W, glyph } from "./font.js";

export type Color = [r: number, g: number, b: number];

/** Plain RGBA framebuffer with the few primitives a line plot needs. */
export class Framebuffer {
  readonly data: Uint8Array;

  constructor(readonly width: number, readonly height: number, bg: Color = [255, 255, 255]) {
    this.data = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = bg[0];
      this.data[4 * i + 1] = bg[1];
      this.data[4 * i + 2] = bg[2];
      this.data[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, c: Color): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (y * this.width + x);
    this.data[i] = c[0];
    this.data[i + 1] = c[1];
    this.data[i + 2] = c[2];
  }

  /** Integer DDA line, optionally dashed (dash/gap in pixels). */
  line(x0: number, y0: number, x1: number, y1: number, c: Color, dash = 0): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1);
    for (let i = 0; i <= steps; i++) {
      if (dash > 0 && Math.floor(i / dash) % 2 === 1) continue;
      this.set(x0 + ((x1 - x0) * i) / steps, y0 + ((y1 - y0) * i) / steps, c);
    }
  }

  /** 5x7 bitmap text, top-left anchored. */
  text(x: number, y: number, s: string, c: Color): void {
    let cx = Math.round(x);
    for (const ch of s) {
      const rows = glyph(ch);
      for (let gy = 0; gy < GLYPH_H; gy++) {
        for (let gx = 0; gx < GLYPH_W; gx++) {
          if (rows[gy][gx] === "#") this.set(cx + gx, y + gy, c);
        }
      }
      cx += GLYPH_W + 1;
    }
  }
}
