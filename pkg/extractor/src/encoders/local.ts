/**
 * Built-in deterministic encoder: low-frequency DCT structure of 16x16 luma
 * patches plus mean patch colour, pushed through a fixed random projection
 * and mean-pooled over the 196 patch tokens.
 *
 * This is a hand-crafted structural feature extractor, not a trained
 * network. It exists so that the exchange format, mean pooling and the
 * similarity trend can be exercised offline with zero model downloads; its
 * per-patch features respond to the same mid-level structure that the
 * distortions destroy, so cosine similarity falls as the distortion degree
 * grows.
 */

import { bilinearResize, boxBlur, lumaPlane } from '../image.js';
import { gaussianStream } from '../prng.js';
import type { RgbImage } from '../types.js';

const INPUT_SIZE = 224;
const BLUR_KERNEL = 5;
const PATCH = 16;
const DCT_KEEP = 6;
/** 6x6 low-frequency DCT block minus the DC term, plus mean R, G, B. */
const RAW_DIM = DCT_KEEP * DCT_KEEP - 1 + 3;
const COLOUR_WEIGHT = 0.05;
const PROJECTION_SEED = 0x53434d58; // "SCMX"

export const LOCAL_DIM = 384;

function dctMatrix(n: number): Float64Array {
  const m = new Float64Array(n * n);
  for (let k = 0; k < n; k++) {
    const scale = Math.sqrt((k === 0 ? 1 : 2) / n);
    for (let i = 0; i < n; i++) {
      m[k * n + i] = scale * Math.cos((Math.PI * (2 * i + 1) * k) / (2 * n));
    }
  }
  return m;
}

const DCT = dctMatrix(PATCH);

function buildProjection(): Float64Array {
  const gauss = gaussianStream(PROJECTION_SEED);
  const p = new Float64Array(RAW_DIM * LOCAL_DIM);
  const scale = 1 / Math.sqrt(RAW_DIM);
  for (let i = 0; i < p.length; i++) p[i] = gauss() * scale;
  return p;
}

const PROJECTION = buildProjection();

function patchFeatures(
  luma: Float64Array,
  img: RgbImage,
  py: number,
  px: number,
): Float64Array {
  const w = img.width;
  // D = M * patch * M^T, keep the low-frequency DCT_KEEP x DCT_KEEP corner
  const tmp = new Float64Array(DCT_KEEP * PATCH);
  for (let k = 0; k < DCT_KEEP; k++) {
    for (let j = 0; j < PATCH; j++) {
      let s = 0;
      for (let i = 0; i < PATCH; i++) {
        s += DCT[k * PATCH + i] * luma[(py + i) * w + (px + j)];
      }
      tmp[k * PATCH + j] = s;
    }
  }
  const out = new Float64Array(RAW_DIM);
  let idx = 0;
  for (let k = 0; k < DCT_KEEP; k++) {
    for (let l = 0; l < DCT_KEEP; l++) {
      if (k === 0 && l === 0) continue; // drop DC
      let s = 0;
      for (let j = 0; j < PATCH; j++) {
        s += tmp[k * PATCH + j] * DCT[l * PATCH + j];
      }
      out[idx++] = s;
    }
  }
  let r = 0;
  let g = 0;
  let b = 0;
  for (let i = 0; i < PATCH; i++) {
    for (let j = 0; j < PATCH; j++) {
      const o = ((py + i) * w + (px + j)) * 3;
      r += img.data[o];
      g += img.data[o + 1];
      b += img.data[o + 2];
    }
  }
  const area = PATCH * PATCH;
  out[idx++] = (r / area) * COLOUR_WEIGHT;
  out[idx++] = (g / area) * COLOUR_WEIGHT;
  out[idx] = (b / area) * COLOUR_WEIGHT;
  return out;
}

function project(features: Float64Array): Float64Array {
  const out = new Float64Array(LOCAL_DIM);
  for (let i = 0; i < RAW_DIM; i++) {
    const f = features[i];
    if (f === 0) continue;
    const row = i * LOCAL_DIM;
    for (let d = 0; d < LOCAL_DIM; d++) out[d] += f * PROJECTION[row + d];
  }
  return out;
}

/** Per-patch token embeddings (196 x LOCAL_DIM) before pooling. */
export function tokenEmbeddings(img: RgbImage): Float64Array[] {
  const resized = boxBlur(bilinearResize(img, INPUT_SIZE, INPUT_SIZE), BLUR_KERNEL);
  const luma = lumaPlane(resized);
  const tokens: Float64Array[] = [];
  for (let py = 0; py < INPUT_SIZE; py += PATCH) {
    for (let px = 0; px < INPUT_SIZE; px += PATCH) {
      tokens.push(project(patchFeatures(luma, resized, py, px)));
    }
  }
  return tokens;
}

/** Mean pooling over all patch tokens. */
export function embed(img: RgbImage): Float64Array {
  const tokens = tokenEmbeddings(img);
  const out = new Float64Array(LOCAL_DIM);
  for (const token of tokens) {
    for (let d = 0; d < LOCAL_DIM; d++) out[d] += token[d];
  }
  for (let d = 0; d < LOCAL_DIM; d++) out[d] /= tokens.length;
  return out;
}
