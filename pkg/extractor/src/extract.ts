import { appendFileSync, readFileSync, writeFileSync } from 'node:fs';

import { readManifest } from './manifest.js';
import { decodePng } from './png.js';
import { embedWith, resolveEncoder } from './registry.js';
import { validateRecord, type EmbeddingRecord } from './types.js';

export interface ExtractJob {
  manifestPath: string;
  encoderId: string;
  outPath: string;
  append?: boolean;
}

export interface ExtractResult {
  written: number;
  failures: { imageId: string; error: string }[];
}

/**
 * Embed every manifest image with one encoder and write exchange records.
 * Undecodable images are reported and skipped; the run continues.
 */
export async function extract(job: ExtractJob): Promise<ExtractResult> {
  const spec = resolveEncoder(job.encoderId);
  const images = readManifest(job.manifestPath);
  if (!job.append) {
    writeFileSync(job.outPath, '');
  }
  const result: ExtractResult = { written: 0, failures: [] };
  for (const image of images) {
    let vector: Float64Array;
    try {
      const img = decodePng(readFileSync(image.path));
      vector = await embedWith(spec, img);
    } catch (err) {
      result.failures.push({ imageId: image.imageId, error: String(err) });
      continue;
    }
    const record: EmbeddingRecord = {
      image_id: image.imageId,
      encoder_id: spec.id,
      pooling: 'mean',
      dim: vector.length,
      vector: Array.from(vector),
    };
    validateRecord(record);
    appendFileSync(job.outPath, JSON.stringify(record) + '\n');
    result.written += 1;
  }
  return result;
}
