import { PNG } from 'pngjs';

import type { RgbImage } from './types.js';

/** Decode a PNG buffer to packed RGB (alpha dropped). */
export function decodePng(buffer: Buffer): RgbImage {
  const png = PNG.sync.read(buffer);
  const data = new Uint8Array(png.width * png.height * 3);
  for (let i = 0, j = 0; i < png.data.length; i += 4, j += 3) {
    data[j] = png.data[i];
    data[j + 1] = png.data[i + 1];
    data[j + 2] = png.data[i + 2];
  }
  return { width: png.width, height: png.height, data };
}

/** Encode packed RGB as a PNG buffer (opaque alpha). */
export function encodePng(img: RgbImage): Buffer {
  const png = new PNG({ width: img.width, height: img.height });
  for (let i = 0, j = 0; j < img.data.length; i += 4, j += 3) {
    png.data[i] = img.data[j];
    png.data[i + 1] = img.data[j + 1];
    png.data[i + 2] = img.data[j + 2];
    png.data[i + 3] = 255;
  }
  return PNG.sync.write(png);
}
