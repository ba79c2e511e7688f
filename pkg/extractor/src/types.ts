/** One line of the embeddings exchange file consumed by `scmix similarity`. */
export interface EmbeddingRecord {
  image_id: string;
  encoder_id: string;
  pooling: string;
  dim: number;
  vector: number[];
}

export interface RgbImage {
  width: number;
  height: number;
  /** Row-major RGB, 3 bytes per pixel. */
  data: Uint8Array;
}

export interface ManifestImage {
  imageId: string;
  path: string;
}

export function validateRecord(rec: EmbeddingRecord): void {
  if (!Number.isInteger(rec.dim) || rec.dim < 1) {
    throw new Error(`dim must be a positive integer, got ${rec.dim}`);
  }
  if (rec.vector.length !== rec.dim) {
    throw new Error(
      `vector length ${rec.vector.length} does not match dim ${rec.dim}`,
    );
  }
  if (!rec.vector.every(Number.isFinite)) {
    throw new Error('vector entries must be finite numbers');
  }
}
