import * as fs from "fs";

// PPM P6 with a bright square blob on a dark background.
export function writePpmBlob(
  path: string,
  cx: number,
  cy: number,
  size = 0.12,
  width = 96,
  height = 96
): void {
  const x0 = Math.floor((cx - size / 2) * width);
  const x1 = Math.floor((cx + size / 2) * width);
  const y0 = Math.floor((cy - size / 2) * height);
  const y1 = Math.floor((cy + size / 2) * height);
  const pixels = Buffer.alloc(width * height * 3);
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const i = (y * width + x) * 3;
      const inBlob = x >= x0 && x <= x1 && y >= y0 && y <= y1;
      pixels[i] = inBlob ? 245 : 25;
      pixels[i + 1] = inBlob ? 245 : 28;
      pixels[i + 2] = inBlob ? 240 : 30;
    }
  }
  const header = Buffer.from(`P6\n${width} ${height}\n255\n`, "ascii");
  fs.writeFileSync(path, Buffer.concat([header, pixels]));
}

export const BLOB_MODEL = {
  type: "luminance-blob",
  threshold: 0.55,
  min_area_frac: 0.0005,
  class: "person",
};
