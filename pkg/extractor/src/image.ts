/**
 * Integer-exact image resampling helpers.
 *
 * Same conventions as the Python toolkit: half-pixel-centred bilinear
 * sampling with clamp-to-edge, box blur with replicate borders, and a single
 * rounding rule (round half up) wherever a mean meets the 8-bit lattice.
 * All intermediate values stay well below 2^53, so plain doubles carry the
 * integer arithmetic exactly.
 */

import type { RgbImage } from './types.js';

function roundDiv(num: number, den: number): number {
  return Math.floor((2 * num + den) / (2 * den));
}

interface AxisSample {
  lo: Int32Array;
  hi: Int32Array;
  frac: Float64Array; // integer-valued numerators of the fractional parts
  den: number;
}

function sampleAxis(dst: number, src: number): AxisSample {
  const lo = new Int32Array(dst);
  const hi = new Int32Array(dst);
  const frac = new Float64Array(dst);
  const den = 2 * dst;
  for (let i = 0; i < dst; i++) {
    const num = (2 * i + 1) * src - dst;
    const f = Math.floor(num / den);
    frac[i] = num - f * den;
    lo[i] = Math.min(Math.max(f, 0), src - 1);
    hi[i] = Math.min(Math.max(f + 1, 0), src - 1);
  }
  return { lo, hi, frac, den };
}

export function bilinearResize(img: RgbImage, outW: number, outH: number): RgbImage {
  const x = sampleAxis(outW, img.width);
  const y = sampleAxis(outH, img.height);
  const den = x.den * y.den;
  const out = new Uint8Array(outW * outH * 3);
  const src = img.data;
  for (let j = 0; j < outH; j++) {
    const wy1 = y.frac[j];
    const wy0 = y.den - wy1;
    const rowA = y.lo[j] * img.width;
    const rowB = y.hi[j] * img.width;
    for (let i = 0; i < outW; i++) {
      const wx1 = x.frac[i];
      const wx0 = x.den - wx1;
      const a = (rowA + x.lo[i]) * 3;
      const b = (rowA + x.hi[i]) * 3;
      const c = (rowB + x.lo[i]) * 3;
      const d = (rowB + x.hi[i]) * 3;
      const o = (j * outW + i) * 3;
      for (let ch = 0; ch < 3; ch++) {
        const top = src[a + ch] * wx0 + src[b + ch] * wx1;
        const bot = src[c + ch] * wx0 + src[d + ch] * wx1;
        out[o + ch] = roundDiv(top * wy0 + bot * wy1, den);
      }
    }
  }
  return { width: outW, height: outH, data: out };
}

/** Box blur with an odd kernel and replicate borders, exact integer mean. */
export function boxBlur(img: RgbImage, kernel: number): RgbImage {
  if (kernel % 2 === 0 || kernel < 1) {
    throw new Error('box blur kernel must be odd and >= 1');
  }
  if (kernel === 1) {
    return { width: img.width, height: img.height, data: img.data.slice() };
  }
  const r = (kernel - 1) / 2;
  const { width: w, height: h, data } = img;
  const clampX = (v: number) => Math.min(Math.max(v, 0), w - 1);
  const clampY = (v: number) => Math.min(Math.max(v, 0), h - 1);
  // horizontal running window sums, then vertical
  const rows = new Float64Array(w * h * 3);
  for (let yy = 0; yy < h; yy++) {
    for (let ch = 0; ch < 3; ch++) {
      let s = 0;
      for (let t = -r; t <= r; t++) s += data[(yy * w + clampX(t)) * 3 + ch];
      rows[(yy * w) * 3 + ch] = s;
      for (let xx = 1; xx < w; xx++) {
        s += data[(yy * w + clampX(xx + r)) * 3 + ch];
        s -= data[(yy * w + clampX(xx - 1 - r)) * 3 + ch];
        rows[(yy * w + xx) * 3 + ch] = s;
      }
    }
  }
  const out = new Uint8Array(w * h * 3);
  const k2 = kernel * kernel;
  for (let xx = 0; xx < w; xx++) {
    for (let ch = 0; ch < 3; ch++) {
      let s = 0;
      for (let t = -r; t <= r; t++) s += rows[(clampY(t) * w + xx) * 3 + ch];
      out[(0 * w + xx) * 3 + ch] = roundDiv(s, k2);
      for (let yy = 1; yy < h; yy++) {
        s += rows[(clampY(yy + r) * w + xx) * 3 + ch];
        s -= rows[(clampY(yy - 1 - r) * w + xx) * 3 + ch];
        out[(yy * w + xx) * 3 + ch] = roundDiv(s, k2);
      }
    }
  }
  return { width: w, height: h, data: out };
}

/** Rec.601 luma plane, round half up, as float64 for downstream transforms. */
export function lumaPlane(img: RgbImage): Float64Array {
  const n = img.width * img.height;
  const out = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    const j = i * 3;
    out[i] = Math.floor(
      (299 * img.data[j] + 587 * img.data[j + 1] + 114 * img.data[j + 2] + 500) / 1000,
    );
  }
  return out;
}
