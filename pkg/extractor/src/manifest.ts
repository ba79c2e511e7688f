import { readFileSync } from 'node:fs';
import { dirname, isAbsolute, resolve } from 'node:path';

import type { ManifestImage } from './types.js';

/**
 * Read the image list from a dataset manifest (JSON lines). Only `image_id`
 * and `path` are consumed here; scoring fields belong to the evaluation
 * harness. Relative paths resolve against the manifest's directory.
 */
export function readManifest(path: string): ManifestImage[] {
  const base = dirname(resolve(path));
  const images: ManifestImage[] = [];
  const seen = new Set<string>();
  const lines = readFileSync(path, 'utf-8').split('\n');
  lines.forEach((line, index) => {
    const trimmed = line.trim();
    if (!trimmed) return;
    let obj: unknown;
    try {
      obj = JSON.parse(trimmed);
    } catch (err) {
      throw new Error(`manifest line ${index + 1}: invalid JSON: ${err}`);
    }
    const rec = obj as Record<string, unknown>;
    if (typeof rec.image_id !== 'string' || typeof rec.path !== 'string') {
      throw new Error(
        `manifest line ${index + 1}: needs string image_id and path fields`,
      );
    }
    if (seen.has(rec.image_id)) {
      throw new Error(
        `manifest line ${index + 1}: duplicate image_id ${JSON.stringify(rec.image_id)}`,
      );
    }
    seen.add(rec.image_id);
    images.push({
      imageId: rec.image_id,
      path: isAbsolute(rec.path) ? rec.path : resolve(base, rec.path),
    });
  });
  if (images.length === 0) {
    throw new Error(`manifest ${path} contains no entries`);
  }
  return images;
}
