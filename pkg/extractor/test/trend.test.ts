/**
 * Embedding-trend acceptance: mean cosine between originals and their
 * grid-distorted versions must fall strictly as the distortion degree grows
 * (Spearman vs degree <= -0.9 over degrees 2, 5, 10), and the produced
 * exchange file must be consumed by the Python toolkit with zero schema
 * errors. The distorted images come from the toolkit's own CLI, so this test
 * exercises the full cross-package loop.
 */

import { execFileSync } from 'node:child_process';
import { existsSync, readFileSync, writeFileSync } from 'node:fs';
import { join } from 'node:path';

import { beforeAll, describe, expect, it } from 'vitest';

import { extract } from '../src/extract.js';
import type { EmbeddingRecord } from '../src/types.js';
import { cosine, syntheticImage, tempDir, writeFixturePng } from './fixtures.js';

const DEGREES = [2, 5, 10];
const VARIANT = 'ostwald-checker';
const N_IMAGES = 20;
const ENCODER = 'patch-dct-384';

function scmix(args: string[]): string {
  return execFileSync('python3', ['-m', 'scmix.cli', ...args], {
    encoding: 'utf-8',
  });
}

function spearman(xs: number[], ys: number[]): number {
  const rank = (vals: number[]) =>
    vals.map((v) => vals.filter((o) => o < v).length);
  const rx = rank(xs);
  const ry = rank(ys);
  const n = xs.length;
  const mean = (n - 1) / 2;
  let num = 0;
  let dx = 0;
  let dy = 0;
  for (let i = 0; i < n; i++) {
    num += (rx[i] - mean) * (ry[i] - mean);
    dx += (rx[i] - mean) ** 2;
    dy += (ry[i] - mean) ** 2;
  }
  return num / Math.sqrt(dx * dy);
}

let dir: string;
let embeddings: Map<string, number[]>;

beforeAll(async () => {
  dir = tempDir('scmix-trend-');
  const imgDir = join(dir, 'imgs');
  const distortedDir = join(dir, 'distorted');
  execFileSync('mkdir', ['-p', imgDir]);

  const extractorRows: object[] = [];
  const harnessRows: object[] = [];
  for (let i = 0; i < N_IMAGES; i++) {
    const id = `img${i}`;
    const path = writeFixturePng(imgDir, `${id}.png`, syntheticImage(500 + i));
    extractorRows.push({ image_id: id, path });
    harnessRows.push({
      image_id: id,
      path,
      label: 'fixture',
      prompt: `describe image ${id}`,
      task: 'exact_match',
    });
  }
  for (const degree of DEGREES) {
    scmix([
      'distort', imgDir,
      '--variant', VARIANT,
      '--degree', String(degree),
      '--out', distortedDir,
    ]);
    for (let i = 0; i < N_IMAGES; i++) {
      const stem = `img${i}__${VARIANT}__d${degree}`;
      const path = join(distortedDir, `${stem}.png`);
      expect(existsSync(path)).toBe(true);
      extractorRows.push({ image_id: stem, path });
    }
  }
  const extractorManifest = join(dir, 'extract-manifest.jsonl');
  writeFileSync(
    extractorManifest,
    extractorRows.map((row) => JSON.stringify(row)).join('\n') + '\n',
  );
  const harnessManifest = join(dir, 'harness-manifest.jsonl');
  writeFileSync(
    harnessManifest,
    harnessRows.map((row) => JSON.stringify(row)).join('\n') + '\n',
  );

  const outPath = join(dir, 'embeddings.jsonl');
  const result = await extract({
    manifestPath: extractorManifest,
    encoderId: ENCODER,
    outPath,
  });
  expect(result.failures).toEqual([]);
  expect(result.written).toBe(N_IMAGES * (1 + DEGREES.length));

  embeddings = new Map();
  for (const line of readFileSync(outPath, 'utf-8').trim().split('\n')) {
    const record = JSON.parse(line) as EmbeddingRecord;
    embeddings.set(record.image_id, record.vector);
  }
});

describe('embedding similarity trend', () => {
  it('mean cosine strictly decreases with the distortion degree', () => {
    const means: number[] = [];
    for (const degree of DEGREES) {
      let total = 0;
      for (let i = 0; i < N_IMAGES; i++) {
        const original = embeddings.get(`img${i}`)!;
        const distorted = embeddings.get(`img${i}__${VARIANT}__d${degree}`)!;
        total += cosine(original, distorted);
      }
      means.push(total / N_IMAGES);
    }
    for (let i = 0; i + 1 < means.length; i++) {
      expect(means[i]).toBeGreaterThan(means[i + 1]);
    }
    expect(spearman(DEGREES, means)).toBeLessThanOrEqual(-0.9);
  });

  it('the exchange file feeds the Python similarity report cleanly', () => {
    const reportDir = join(dir, 'report');
    scmix([
      'similarity',
      '--manifest', join(dir, 'harness-manifest.jsonl'),
      '--distorted-root', join(dir, 'distorted'),
      '--variants', VARIANT,
      '--degrees', DEGREES.join(','),
      '--embeddings', join(dir, 'embeddings.jsonl'),
      '--out-dir', reportDir,
    ]);
    const csv = readFileSync(join(reportDir, 'similarity.csv'), 'utf-8')
      .trim()
      .split('\n');
    const cosineRows = csv.filter((line) => line.includes(',cosine,'));
    expect(cosineRows.length).toBe(N_IMAGES * DEGREES.length);
    expect(cosineRows.every((line) => line.includes(ENCODER))).toBe(true);
  });
});
