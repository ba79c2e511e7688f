import { embed as localEmbed, LOCAL_DIM } from './encoders/local.js';
import { hubAvailable, hubEmbed } from './encoders/hub.js';
import type { RgbImage } from './types.js';

export interface EncoderSpec {
  id: string;
  family: string;
  dim: number;
  backend: 'local' | 'hub';
  modelId?: string;
  hasClassToken?: boolean;
  notes: string;
}

export const ENCODERS: EncoderSpec[] = [
  {
    id: 'patch-dct-384',
    family: 'local-structural',
    dim: LOCAL_DIM,
    backend: 'local',
    notes: 'built-in deterministic structural features; no downloads',
  },
  {
    id: 'dinov2-small',
    family: 'self-supervised',
    dim: 384,
    backend: 'hub',
    modelId: 'Xenova/dinov2-small',
    hasClassToken: true,
    notes: 'needs @huggingface/transformers and network',
  },
  {
    id: 'clip-vit-base-patch32',
    family: 'language-aligned contrastive',
    dim: 768,
    backend: 'hub',
    modelId: 'Xenova/clip-vit-base-patch32',
    hasClassToken: true,
    notes: 'needs @huggingface/transformers and network',
  },
];

export function encoderIds(): string[] {
  return ENCODERS.map((encoder) => encoder.id);
}

export function resolveEncoder(id: string): EncoderSpec {
  const spec = ENCODERS.find((encoder) => encoder.id === id);
  if (!spec) {
    throw new Error(
      `unknown encoder ${JSON.stringify(id)}; valid ids: ${encoderIds().join(', ')}`,
    );
  }
  return spec;
}

export async function embedWith(
  spec: EncoderSpec,
  img: RgbImage,
): Promise<Float64Array> {
  if (spec.backend === 'local') {
    return localEmbed(img);
  }
  return hubEmbed(spec.modelId!, img, spec.hasClassToken ?? false);
}

export async function listEncoderRows(): Promise<string[]> {
  const hubReady = await hubAvailable();
  return ENCODERS.map((encoder) => {
    const available = encoder.backend === 'local' || hubReady;
    return [
      encoder.id.padEnd(24),
      String(encoder.dim).padStart(5),
      encoder.family.padEnd(30),
      available ? 'available' : 'needs install',
    ].join('  ');
  });
}
