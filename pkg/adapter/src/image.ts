// Image loading: PPM (P6) natively, PNG via pngjs. Everything downstream
// works on normalized coordinates, so resolution never leaks out.

import * as fs from "fs";
import { PNG } from "pngjs";

export interface RgbImage {
  width: number;
  height: number;
  data: Uint8Array; // RGB triplets, row-major
}

export const IMAGE_EXTENSIONS = [".ppm", ".png"];

function parsePpm(buf: Buffer): RgbImage {
  // header: "P6" <width> <height> <maxval> then binary RGB
  let pos = 0;
  const token = (): string => {
    while (pos < buf.length && /\s/.test(String.fromCharCode(buf[pos]))) pos++;
    if (buf[pos] === 0x23) {
      // comment line
      while (pos < buf.length && buf[pos] !== 0x0a) pos++;
      return token();
    }
    const start = pos;
    while (pos < buf.length && !/\s/.test(String.fromCharCode(buf[pos]))) pos++;
    return buf.subarray(start, pos).toString("ascii");
  };
  const magic = token();
  if (magic !== "P6") throw new Error(`unsupported PPM magic ${magic}`);
  const width = parseInt(token(), 10);
  const height = parseInt(token(), 10);
  const maxval = parseInt(token(), 10);
  if (!(width > 0 && height > 0)) throw new Error("bad PPM dimensions");
  if (maxval !== 255) throw new Error(`unsupported PPM maxval ${maxval}`);
  pos++; // single whitespace after maxval
  const need = width * height * 3;
  const pixels = buf.subarray(pos, pos + need);
  if (pixels.length < need) throw new Error("truncated PPM pixel data");
  return { width, height, data: new Uint8Array(pixels) };
}

function parsePng(buf: Buffer): RgbImage {
  const png = PNG.sync.read(buf);
  const rgb = new Uint8Array(png.width * png.height * 3);
  for (let i = 0; i < png.width * png.height; i++) {
    rgb[i * 3] = png.data[i * 4];
    rgb[i * 3 + 1] = png.data[i * 4 + 1];
    rgb[i * 3 + 2] = png.data[i * 4 + 2];
  }
  return { width: png.width, height: png.height, data: rgb };
}

export function loadImage(path: string): RgbImage {
  const buf = fs.readFileSync(path);
  if (path.toLowerCase().endsWith(".ppm")) return parsePpm(buf);
  if (path.toLowerCase().endsWith(".png")) return parsePng(buf);
  throw new Error(`unsupported image type: ${path}`);
}

export function luminance(img: RgbImage, x: number, y: number): number {
  const i = (y * img.width + x) * 3;
  return (
    (0.2126 * img.data[i] + 0.7152 * img.data[i + 1] + 0.0722 * img.data[i + 2]) / 255
  );
}
