"""Similarity diagnostics: SSIM, histogram correlation, embedding cosine.

The report generator pairs original images with their distorted renderings on
disk (via the ``<stem>__<variant>__d<degree>.png`` naming scheme) and, when an
embeddings exchange file is supplied, adds cosine similarity rows per encoder.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._pure import luma_plane
from .images import distorted_path, load_image

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_DYNAMIC_RANGE = 255.0

METRIC_SSIM = "ssim"
METRIC_HIST_CORR = "hist_corr"
METRIC_COSINE = "cosine"


def _gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    r = size // 2
    x = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return g / g.sum()


_WINDOW_1D = _gaussian_window()


def _filter_valid(plane: np.ndarray, g: np.ndarray = _WINDOW_1D) -> np.ndarray:
    # separable Gaussian correlation over fully interior windows only
    t = sliding_window_view(plane, g.size, axis=1) @ g
    return sliding_window_view(t, g.size, axis=0) @ g


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Single-scale SSIM between the luma planes of two same-size images.

    Gaussian 11x11 window (sigma 1.5), K1=0.01, K2=0.03, dynamic range 255,
    averaged over all fully valid window positions.
    """
    if a.shape != b.shape:
        raise ValueError("images must have identical dimensions")
    if a.shape[0] < SSIM_WINDOW or a.shape[1] < SSIM_WINDOW:
        raise ValueError(f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW}")
    x = luma_plane(a).astype(np.float64)
    y = luma_plane(b).astype(np.float64)
    c1 = (SSIM_K1 * SSIM_DYNAMIC_RANGE) ** 2
    c2 = (SSIM_K2 * SSIM_DYNAMIC_RANGE) ** 2
    mu_x = _filter_valid(x)
    mu_y = _filter_valid(y)
    var_x = _filter_valid(x * x) - mu_x * mu_x
    var_y = _filter_valid(y * y) - mu_y * mu_y
    cov = _filter_valid(x * y) - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float((num / den).mean())


def _channel_histogram(img: np.ndarray, channel: int) -> np.ndarray:
    return np.bincount(img[..., channel].ravel(), minlength=256).astype(
        np.float64
    )


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    vx = float(xc @ xc)
    vy = float(yc @ yc)
    if vx == 0.0 or vy == 0.0:
        return 1.0 if np.array_equal(x, y) else 0.0
    return float((xc @ yc) / np.sqrt(vx * vy))


def histogram_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Mean per-channel Pearson correlation of the 256-bin histograms.

    Dimensions may differ; histograms ignore geometry entirely.
    """
    return float(
        np.mean(
            [
                _pearson(_channel_histogram(a, c), _channel_histogram(b, c))
                for c in range(3)
            ]
        )
    )


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1]."""
    ua = np.asarray(u, dtype=np.float64)
    va = np.asarray(v, dtype=np.float64)
    if ua.shape != va.shape or ua.ndim != 1:
        raise ValueError("vectors must be one-dimensional and equal length")
    nu = float(np.linalg.norm(ua))
    nv = float(np.linalg.norm(va))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity undefined for zero vectors")
    return float(np.clip(float(ua @ va) / (nu * nv), -1.0, 1.0))


# ---------------------------------------------------------------------------
# embeddings exchange format

EMBEDDING_FIELDS = ("image_id", "encoder_id", "pooling", "dim", "vector")


class EmbeddingFormatError(ValueError):
    """Raised for malformed embedding records; carries the 1-based line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"embeddings line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class EmbeddingRecord:
    image_id: str
    encoder_id: str
    pooling: str
    dim: int
    vector: np.ndarray


def read_embeddings(path: str | Path) -> dict[tuple[str, str], EmbeddingRecord]:
    """Parse a line-delimited embeddings file keyed by (image_id, encoder_id)."""
    records: dict[tuple[str, str], EmbeddingRecord] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingFormatError(line_no, f"invalid JSON: {exc}")
            if not isinstance(obj, dict):
                raise EmbeddingFormatError(line_no, "record must be an object")
            missing = [f for f in EMBEDDING_FIELDS if f not in obj]
            if missing:
                raise EmbeddingFormatError(
                    line_no, f"missing fields: {', '.join(missing)}"
                )
            dim = obj["dim"]
            vector = obj["vector"]
            if not isinstance(dim, int) or dim < 1:
                raise EmbeddingFormatError(line_no, "dim must be a positive integer")
            if not isinstance(vector, list) or len(vector) != dim:
                raise EmbeddingFormatError(
                    line_no, f"vector length {len(vector) if isinstance(vector, list) else '?'} != dim {dim}"
                )
            try:
                vec = np.asarray(vector, dtype=np.float64)
            except (TypeError, ValueError):
                raise EmbeddingFormatError(line_no, "vector entries must be numbers")
            if not np.all(np.isfinite(vec)):
                raise EmbeddingFormatError(line_no, "vector entries must be finite")
            rec = EmbeddingRecord(
                image_id=str(obj["image_id"]),
                encoder_id=str(obj["encoder_id"]),
                pooling=str(obj["pooling"]),
                dim=dim,
                vector=vec,
            )
            records[(rec.image_id, rec.encoder_id)] = rec
    return records


# ---------------------------------------------------------------------------
# report generation


@dataclass(frozen=True)
class SimilarityRow:
    image_id: str
    variant: str
    degree: int
    metric: str
    encoder_id: str  # empty for image-space metrics
    value: float


@dataclass
class SimilarityReport:
    rows: list[SimilarityRow]
    aggregates: list[dict]
    errors: list[str]


def _entry_cells(entry, distorted_root, variants, degrees, embeddings,
                 encoder_ids):
    """All similarity rows and errors for one manifest entry."""
    rows: list[SimilarityRow] = []
    errors: list[str] = []
    try:
        original = load_image(entry.path)
    except OSError as exc:
        errors.append(f"{entry.image_id}: cannot load original: {exc}")
        return rows, errors
    for variant in variants:
        for degree in degrees:
            dpath = distorted_path(
                distorted_root, entry.image_id, variant, degree
            )
            try:
                distorted = load_image(dpath)
            except OSError as exc:
                errors.append(f"{entry.image_id}/{variant}/d{degree}: {exc}")
                continue
            try:
                ssim_value = ssim(original, distorted)
            except ValueError as exc:
                errors.append(f"{entry.image_id}/{variant}/d{degree}: {exc}")
                continue
            rows.append(
                SimilarityRow(
                    entry.image_id, variant, degree, METRIC_SSIM, "",
                    ssim_value,
                )
            )
            rows.append(
                SimilarityRow(
                    entry.image_id, variant, degree, METRIC_HIST_CORR, "",
                    histogram_correlation(original, distorted),
                )
            )
            distorted_id = dpath.stem
            for enc in encoder_ids:
                orig_rec = embeddings.get((entry.image_id, enc))
                dist_rec = embeddings.get((distorted_id, enc))
                if orig_rec is None or dist_rec is None:
                    errors.append(
                        f"{entry.image_id}/{variant}/d{degree}: missing "
                        f"embedding for encoder {enc}"
                    )
                    continue
                rows.append(
                    SimilarityRow(
                        entry.image_id, variant, degree, METRIC_COSINE, enc,
                        cosine_similarity(orig_rec.vector, dist_rec.vector),
                    )
                )
    return rows, errors


def similarity_report(
    entries: Iterable,
    distorted_root: str | Path,
    variants: Sequence[str],
    degrees: Sequence[int],
    embeddings_path: str | Path | None = None,
    workers: int | None = None,
) -> SimilarityReport:
    """Per-cell SSIM + histogram correlation (+ cosine with embeddings).

    ``entries`` provides ``image_id`` and ``path`` attributes (manifest
    entries). Missing distorted files or missing embedding records are
    recorded as per-cell errors and skipped; a malformed embeddings file is a
    fatal :class:`EmbeddingFormatError`.

    Work is parallelised per entry (the metrics are pure and NumPy releases
    the GIL); rows and errors are collected in entry order, so the output is
    identical for any worker count.
    """
    embeddings = read_embeddings(embeddings_path) if embeddings_path else {}
    encoder_ids = sorted({enc for (_, enc) in embeddings})
    entries = list(entries)
    if workers is None:
        workers = min(8, os.cpu_count() or 1)

    def work(entry):
        return _entry_cells(
            entry, distorted_root, variants, degrees, embeddings, encoder_ids
        )

    if workers <= 1 or len(entries) <= 1:
        results = [work(entry) for entry in entries]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, entries))
    rows: list[SimilarityRow] = []
    errors: list[str] = []
    for entry_rows, entry_errors in results:
        rows.extend(entry_rows)
        errors.extend(entry_errors)
    return SimilarityReport(rows, _aggregate_rows(rows), errors)


def _aggregate_rows(rows: list[SimilarityRow]) -> list[dict]:
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        key = (row.variant, row.degree, row.metric, row.encoder_id)
        groups.setdefault(key, []).append(row.value)
    out = []
    for (variant, degree, metric, encoder_id), values in sorted(groups.items()):
        out.append(
            {
                "variant": variant,
                "degree": degree,
                "metric": metric,
                "encoder_id": encoder_id,
                "mean_value": sum(values) / len(values),
                "count": len(values),
            }
        )
    return out


def write_report_csv(report: SimilarityReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["image_id", "variant", "degree", "metric", "encoder_id", "value"]
        )
        for row in report.rows:
            writer.writerow(
                [row.image_id, row.variant, row.degree, row.metric,
                 row.encoder_id, repr(row.value)]
            )


def write_aggregate_csv(report: SimilarityReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["variant", "degree", "metric", "encoder_id", "mean_value", "count"]
        )
        for agg in report.aggregates:
            writer.writerow(
                [agg["variant"], agg["degree"], agg["metric"],
                 agg["encoder_id"], repr(agg["mean_value"]), agg["count"]]
            )
