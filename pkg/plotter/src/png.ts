import { deflateSync } from "node:zlib";

const SIGNATURE = Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]);

const CRC_TABLE = new Uint32Array(256);
for (let n = 0; n < 256; n++) {
  let c = n;
  for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
  CRC_TABLE[n] = c >>> 0;
}

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const len = Buffer.alloc(4);
  len.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "latin1"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([len, body, crc]);
}

/**
 * Encode an RGBA framebuffer as a PNG (8-bit, color type 6, filter 0).
 * `texts` become tEXt chunks; zlib level is pinned so identical pixels and
 * texts give identical bytes.
 */
export function encodePng(
  width: number, height: number, rgba: Uint8Array,
  texts: [keyword: string, text: string][] = [],
): Buffer {
  if (rgba.length !== width * height * 4) {
    throw new Error(`framebuffer is ${rgba.length} bytes, want ${width}x${height}x4`);
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 6;   // RGBA
  const raw = Buffer.alloc(height * (1 + width * 4));
  for (let yRow = 0; yRow < height; yRow++) {
    const src = yRow * width * 4;
    raw.set(rgba.subarray(src, src + width * 4), yRow * (1 + width * 4) + 1);
  }
  const idat = deflateSync(raw, { level: 9 });
  const parts = [SIGNATURE, chunk("IHDR", ihdr)];
  for (const [keyword, text] of texts) {
    parts.push(chunk("tEXt", Buffer.concat([
      Buffer.from(keyword, "latin1"), Buffer.from([0]),
      Buffer.from(text, "latin1"),
    ])));
  }
  parts.push(chunk("IDAT", idat), chunk("IEND", Buffer.alloc(0)));
  return Buffer.concat(parts);
}

/** Read back the tEXt chunks of a PNG as [keyword, text] pairs. */
export function readPngTexts(png: Buffer): [string, string][] {
  if (!png.subarray(0, 8).equals(SIGNATURE)) throw new Error("not a PNG file");
  const out: [string, string][] = [];
  let pos = 8;
  while (pos + 8 <= png.length) {
    const len = png.readUInt32BE(pos);
    const type = png.toString("latin1", pos + 4, pos + 8);
    if (type === "tEXt") {
      const data = png.subarray(pos + 8, pos + 8 + len);
      const sep = data.indexOf(0);
      out.push([
        data.toString("latin1", 0, sep),
        data.toString("latin1", sep + 1),
      ]);
    }
    pos += 12 + len;
    if (type === "IEND") break;
  }
  return out;
}
