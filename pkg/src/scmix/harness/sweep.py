"""Distortion sweeps against an endpoint, with resume, plus aggregation.

Results are appended to a line-delimited JSON file, one row per
(image, variant, degree, preprocess, question) cell, flushed per row so an
interrupted sweep loses at most the in-flight cells. On rerun the existing
rows form a completed-cells index and only the missing cells are queried.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import requests

from ..illusions import DistortionSpec, IllusionVariant, apply
from ..images import load_image
from ..preprocess import PreprocessSpec, resize_canonical
from .client import AuthError, EndpointConfig, QueryError, build_request, query_model
from .manifest import TASK_EXACT_MATCH, TASK_MME_PAIR, DatasetManifest, ManifestEntry
from .scoring import parse_yes_no, score_exact_match

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    model: str
    variant: str
    degree: int
    preprocess: str
    image_id: str
    question_index: int
    task: str
    raw_response: str
    correct: bool | None
    error: str | None
    latency_ms: float
    timestamp: str

    def key(self) -> tuple:
        return (
            self.dataset,
            self.model,
            self.variant,
            self.degree,
            self.preprocess,
            self.image_id,
            self.question_index,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), ensure_ascii=False)

    @classmethod
    def from_obj(cls, obj: dict) -> "ResultRow":
        return cls(
            dataset=obj["dataset"],
            model=obj["model"],
            variant=obj["variant"],
            degree=int(obj["degree"]),
            preprocess=obj["preprocess"],
            image_id=obj["image_id"],
            question_index=int(obj["question_index"]),
            task=obj["task"],
            raw_response=obj["raw_response"],
            correct=obj["correct"],
            error=obj.get("error"),
            latency_ms=float(obj["latency_ms"]),
            timestamp=obj["timestamp"],
        )


def read_results(path: str | Path, on_bad_line=None) -> list[ResultRow]:
    """Parse a results file; malformed lines go to ``on_bad_line`` and are
    skipped."""
    rows: list[ResultRow] = []
    p = Path(path)
    if not p.exists():
        return rows
    with open(p, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(ResultRow.from_obj(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                if on_bad_line is not None:
                    on_bad_line(line_no, str(exc))
                else:
                    log.warning("results line %d: skipping malformed row: %s",
                                line_no, exc)
    return rows


@dataclass(frozen=True)
class _Cell:
    entry: ManifestEntry
    variant: IllusionVariant
    degree: int
    pspec: PreprocessSpec
    question_index: int

    def key(self, dataset: str, model: str) -> tuple:
        return (
            dataset,
            model,
            self.variant.value,
            self.degree,
            self.pspec.tag,
            self.entry.image_id,
            self.question_index,
        )


def _score(entry: ManifestEntry, question_index: int, response: str) -> bool:
    if entry.task == TASK_EXACT_MATCH:
        return score_exact_match(response, entry.label)
    gold = entry.qa_pairs[question_index].gold
    verdict = parse_yes_no(response)
    return verdict is not None and verdict == gold


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class SweepStats:
    completed: int = 0
    skipped: int = 0
    failed: int = 0


def run_sweep(
    manifest: DatasetManifest,
    endpoint: EndpointConfig,
    variants: Sequence[IllusionVariant],
    degrees: Sequence[int],
    preprocess_specs: Sequence[PreprocessSpec],
    seed: int,
    out_path: str | Path,
) -> SweepStats:
    """Query every (entry x variant x degree x preprocess x question) cell.

    Pipeline per cell: canonical resize, distortion, preprocessing, request,
    scoring, durable append. Degree 1 is always included as the undistorted
    baseline. Cell failures (retries exhausted, undecodable images) are
    recorded as rows with an ``error`` and do not stop the run; an
    authentication failure aborts it.
    """
    degrees = sorted(set(degrees) | {1})
    if not preprocess_specs:
        preprocess_specs = [PreprocessSpec.none()]
    cells = [
        _Cell(entry, variant, degree, pspec, qi)
        for entry in manifest.entries
        for variant in variants
        for degree in degrees
        for pspec in preprocess_specs
        for qi in range(entry.question_count)
    ]
    done = {row.key() for row in read_results(out_path)}
    todo = [
        c for c in cells
        if c.key(manifest.dataset_name, endpoint.model_name) not in done
    ]
    stats = SweepStats(skipped=len(cells) - len(todo))
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)

    session = requests.Session()

    def run_cell(cell: _Cell) -> ResultRow:
        base = dict(
            dataset=manifest.dataset_name,
            model=endpoint.model_name,
            variant=cell.variant.value,
            degree=cell.degree,
            preprocess=cell.pspec.tag,
            image_id=cell.entry.image_id,
            question_index=cell.question_index,
            task=cell.entry.task,
        )
        try:
            img = resize_canonical(load_image(cell.entry.path))
            img = apply(DistortionSpec(cell.variant, cell.degree, seed), img)
            img = cell.pspec.apply(img)
            payload = build_request(cell.entry, img, endpoint, cell.question_index)
            response, latency_ms = query_model(endpoint, payload, session)
        except (QueryError, OSError, ValueError) as exc:
            return ResultRow(
                **base,
                raw_response="",
                correct=None,
                error=str(exc),
                latency_ms=0.0,
                timestamp=_utc_now(),
            )
        return ResultRow(
            **base,
            raw_response=response,
            correct=_score(cell.entry, cell.question_index, response),
            error=None,
            latency_ms=latency_ms,
            timestamp=_utc_now(),
        )

    with open(out, "a", encoding="utf-8") as fh:
        with ThreadPoolExecutor(max_workers=endpoint.max_in_flight) as pool:
            futures = [pool.submit(run_cell, cell) for cell in todo]
            try:
                for fut in as_completed(futures):
                    row = fut.result()  # AuthError propagates and aborts
                    fh.write(row.to_json() + "\n")
                    fh.flush()
                    if row.error is None:
                        stats.completed += 1
                    else:
                        stats.failed += 1
                        log.warning("cell failed: %s: %s", row.key(), row.error)
            except BaseException:
                for f in futures:
                    f.cancel()
                raise
    return stats


# ---------------------------------------------------------------------------
# aggregation


AGGREGATE_COLUMNS = [
    "dataset",
    "model",
    "variant",
    "degree",
    "preprocess",
    "answered",
    "correct",
    "failed",
    "accuracy",
    "acc",
    "acc_plus",
    "mme_score",
]


def aggregate(results_path: str | Path, warnings: list | None = None) -> list[dict]:
    """Per-(dataset, model, variant, degree, preprocess) accuracy table.

    ``accuracy`` is correct/answered over scored rows; failed cells are
    counted separately. Groups containing MME-style rows also report ``acc``
    (same as accuracy), ``acc_plus`` (both questions of an image correct) and
    ``mme_score`` = 100*acc + 100*acc_plus.
    """
    def warn(line_no: int, msg: str) -> None:
        text = f"results line {line_no}: {msg}"
        log.warning("%s", text)
        if warnings is not None:
            warnings.append(text)

    rows = read_results(results_path, on_bad_line=warn)
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        key = (row.dataset, row.model, row.variant, row.degree, row.preprocess)
        groups.setdefault(key, []).append(row)
    table = []
    for key in sorted(groups):
        group = groups[key]
        answered = [r for r in group if r.error is None]
        correct = sum(1 for r in answered if r.correct)
        failed = len(group) - len(answered)
        accuracy = correct / len(answered) if answered else 0.0
        record = {
            "dataset": key[0],
            "model": key[1],
            "variant": key[2],
            "degree": key[3],
            "preprocess": key[4],
            "answered": len(answered),
            "correct": correct,
            "failed": failed,
            "accuracy": accuracy,
            "acc": "",
            "acc_plus": "",
            "mme_score": "",
        }
        mme_rows = [r for r in answered if r.task == TASK_MME_PAIR]
        if mme_rows:
            by_image: dict[str, list[ResultRow]] = {}
            for r in mme_rows:
                by_image.setdefault(r.image_id, []).append(r)
            acc = sum(1 for r in mme_rows if r.correct) / len(mme_rows)
            complete = {
                img: rs for img, rs in by_image.items() if len(rs) == 2
            }
            acc_plus = (
                sum(1 for rs in complete.values() if all(r.correct for r in rs))
                / len(complete)
                if complete
                else 0.0
            )
            record["acc"] = acc
            record["acc_plus"] = acc_plus
            record["mme_score"] = 100.0 * acc + 100.0 * acc_plus
        table.append(record)
    return table


def write_aggregate_csv(table: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=AGGREGATE_COLUMNS)
        writer.writeheader()
        for record in table:
            writer.writerow(record)
