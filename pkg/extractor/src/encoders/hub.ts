/**
 * Hub-backed encoders via transformers.js (optional dependency).
 *
 * `@huggingface/transformers` is intentionally not a hard dependency: it
 * pulls in a native ONNX runtime and needs network access to fetch
 * checkpoints on first use. When it is not installed (or the checkpoint
 * cannot be fetched) the error carries instructions instead of a stack of
 * module-resolution noise.
 */

import type { RgbImage } from '../types.js';

type FeaturePipeline = (
  image: unknown,
  options: { pooling: 'none' },
) => Promise<{ dims: number[]; data: Float32Array }>;

const pipelines = new Map<string, FeaturePipeline>();

async function loadPipeline(modelId: string): Promise<FeaturePipeline> {
  const cached = pipelines.get(modelId);
  if (cached) return cached;
  let transformers: any;
  try {
    transformers = await import('@huggingface/transformers');
  } catch {
    throw new Error(
      `encoder requires the optional dependency @huggingface/transformers ` +
        `(npm install @huggingface/transformers) and network access to fetch ` +
        `the ${modelId} checkpoint`,
    );
  }
  const pipe = (await transformers.pipeline(
    'image-feature-extraction',
    modelId,
  )) as FeaturePipeline;
  pipelines.set(modelId, pipe);
  return pipe;
}

export async function hubAvailable(): Promise<boolean> {
  try {
    await import('@huggingface/transformers');
    return true;
  } catch {
    return false;
  }
}

/**
 * Mean-pooled token features from a hub checkpoint. The class token (first
 * token, when the backbone emits one as an odd token count) is excluded so
 * pooling covers spatial tokens only.
 */
export async function hubEmbed(
  modelId: string,
  img: RgbImage,
  expectTokensWithClass: boolean,
): Promise<Float64Array> {
  const transformers: any = await import('@huggingface/transformers');
  const pipe = await loadPipeline(modelId);
  const raw = new transformers.RawImage(
    Uint8ClampedArray.from(img.data),
    img.width,
    img.height,
    3,
  );
  const output = await pipe(raw, { pooling: 'none' });
  const [, tokens, dim] = output.dims;
  const start = expectTokensWithClass ? 1 : 0;
  const pooled = new Float64Array(dim);
  for (let t = start; t < tokens; t++) {
    const base = t * dim;
    for (let d = 0; d < dim; d++) pooled[d] += output.data[base + d];
  }
  const count = tokens - start;
  for (let d = 0; d < dim; d++) pooled[d] /= count;
  return pooled;
}
