import type { Color } from "./raster.js";

function esc(s: string): string {
  return s.replace(/\\/g, "\\\\").replace(/\(/g, "\\(").replace(/\)/g, "\\)");
}

function num(v: number): string {
  const s = v.toFixed(2);
  return s.replace(/\.?0+$/, "") || "0";
}

/**
 * Single-page vector PDF builder covering exactly what the plot needs:
 * stroked polylines (optionally dashed), filled rectangles, Helvetica text.
 * No timestamps or ids — identical drawing commands give identical bytes.
 * The full series payload is stored in the document's /Subject entry.
 */
export class PdfPage {
  private ops: string[] = [];

  constructor(readonly width: number, readonly height: number,
              private subject: string) {}

  private rgb(c: Color): string {
    return `${num(c[0] / 255)} ${num(c[1] / 255)} ${num(c[2] / 255)}`;
  }

  /** y runs downward (raster convention); flipped here once. */
  private flip(y: number): number {
    return this.height - y;
  }

  line(x0: number, y0: number, x1: number, y1: number, c: Color, dash = 0): void {
    this.polyline([[x0, y0], [x1, y1]], c, dash);
  }

  polyline(pts: [number, number][], c: Color, dash = 0): void {
    if (pts.length < 2) return;
    const d = dash > 0 ? `[${num(dash)} ${num(dash)}] 0 d` : "[] 0 d";
    const path = pts
      .map(([x, y], i) => `${num(x)} ${num(this.flip(y))} ${i === 0 ? "m" : "l"}`)
      .join(" ");
    this.ops.push(`${this.rgb(c)} RG 1 w ${d} ${path} S`);
  }

  fillRect(x: number, y: number, w: number, h: number, c: Color): void {
    this.ops.push(
      `${this.rgb(c)} rg ${num(x)} ${num(this.flip(y + h))} ${num(w)} ${num(h)} re f`);
  }

  /** Top-left anchored to match the raster surface; size in points. */
  text(x: number, y: number, s: string, c: Color, size = 8): void {
    const baseline = this.flip(y + 0.8 * size);
    this.ops.push(
      `BT ${this.rgb(c)} rg /F1 ${num(size)} Tf ` +
      `${num(x)} ${num(baseline)} Td (${esc(s)}) Tj ET`);
  }

  render(): Buffer {
    const content = this.ops.join("\n");
    const objects = [
      "<< /Type /Catalog /Pages 2 0 R >>",
      "<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
      `<< /Type /Page /Parent 2 0 R /MediaBox [0 0 ${this.width} ${this.height}] ` +
        "/Resources << /Font << /F1 4 0 R >> >> /Contents 5 0 R >>",
      "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>",
      `<< /Length ${Buffer.byteLength(content)} >>\nstream\n${content}\nendstream`,
      `<< /Subject (${esc(this.subject)}) >>`,
    ];
    let body = "%PDF-1.4\n";
    const offsets: number[] = [];
    objects.forEach((obj, i) => {
      offsets.push(Buffer.byteLength(body));
      body += `${i + 1} 0 obj\n${obj}\nendobj\n`;
    });
    const xref = Buffer.byteLength(body);
    body += `xref\n0 ${objects.length + 1}\n0000000000 65535 f \n`;
    for (const off of offsets) body += `${String(off).padStart(10, "0")} 00000 n \n`;
    body += `trailer\n<< /Size ${objects.length + 1} /Root 1 0 R /Info 6 0 R >>\n` +
      `startxref\n${xref}\n%%EOF\n`;
    return Buffer.from(body, "latin1");
  }
}

/** Read back the /Subject payload of a PDF produced by PdfPage. */
export function readPdfSubject(pdf: Buffer): string {
  const text = pdf.toString("latin1");
  const tag = "/Subject (";
  const start = text.indexOf(tag);
  if (start < 0) throw new Error("no /Subject entry in PDF");
  let out = "";
  for (let i = start + tag.length; i < text.length; i++) {
    const ch = text[i];
    if (ch === "\\") {
      out += text[++i];
    } else if (ch === ")") {
      return out;
    } else {
      out += ch;
    }
  }
  throw new Error("unterminated /Subject string");
}
