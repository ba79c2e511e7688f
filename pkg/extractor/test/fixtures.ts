import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { mulberry32 } from '../src/prng.js';
import { encodePng } from '../src/png.js';
import type { RgbImage } from '../src/types.js';

/** Deterministic smooth colour image (cosine fields plus soft blobs). */
export function syntheticImage(seed: number, size = 360): RgbImage {
  const rand = mulberry32(seed);
  const planes = [
    new Float64Array(size * size),
    new Float64Array(size * size),
    new Float64Array(size * size),
  ];
  for (let c = 0; c < 3; c++) {
    for (let wave = 0; wave < 5; wave++) {
      const fx = 0.5 + rand() * 2.5;
      const fy = 0.5 + rand() * 2.5;
      const p1 = rand() * 2 * Math.PI;
      const p2 = rand() * 2 * Math.PI;
      const amp = 0.4 + rand() * 0.6;
      for (let y = 0; y < size; y++) {
        const wy = Math.cos((2 * Math.PI * fy * y) / size + p2);
        for (let x = 0; x < size; x++) {
          planes[c][y * size + x] +=
            amp * Math.cos((2 * Math.PI * fx * x) / size + p1) * wy;
        }
      }
    }
  }
  for (let blob = 0; blob < 3; blob++) {
    const cx = 0.2 + rand() * 0.6;
    const cy = 0.2 + rand() * 0.6;
    const rad = 0.08 + rand() * 0.17;
    const colour = [rand() * 2 - 1, rand() * 2 - 1, rand() * 2 - 1];
    for (let y = 0; y < size; y++) {
      const dy = y / size - cy;
      for (let x = 0; x < size; x++) {
        const dx = x / size - cx;
        const mask = Math.exp(-((dx * dx + dy * dy) / (rad * rad)));
        for (let c = 0; c < 3; c++) planes[c][y * size + x] += mask * colour[c];
      }
    }
  }
  let lo = Infinity;
  let hi = -Infinity;
  for (const plane of planes) {
    for (const v of plane) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  const span = hi - lo || 1;
  const data = new Uint8Array(size * size * 3);
  for (let i = 0; i < size * size; i++) {
    for (let c = 0; c < 3; c++) {
      data[i * 3 + c] = Math.round(((planes[c][i] - lo) / span) * 255);
    }
  }
  return { width: size, height: size, data };
}

export function tempDir(prefix: string): string {
  return mkdtempSync(join(tmpdir(), prefix));
}

export function writeFixturePng(dir: string, name: string, img: RgbImage): string {
  const path = join(dir, name);
  writeFileSync(path, encodePng(img));
  return path;
}

export function cosine(u: ArrayLike<number>, v: ArrayLike<number>): number {
  let dot = 0;
  let nu = 0;
  let nv = 0;
  for (let i = 0; i < u.length; i++) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  return dot / Math.sqrt(nu * nv);
}
