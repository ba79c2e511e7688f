"""Dataset manifests: line-delimited JSON records describing images to score.

Each line is an object with fields ``image_id``, ``path``, ``prompt``,
``task`` ("exact_match" or "mme_pair"), plus ``label`` for exact-match tasks
and ``qa_pairs`` (exactly two [question, "yes"|"no"] pairs) for MME-style
tasks. Relative image paths resolve against the manifest's directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

TASK_EXACT_MATCH = "exact_match"
TASK_MME_PAIR = "mme_pair"

_TASKS = (TASK_EXACT_MATCH, TASK_MME_PAIR)


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class QaPair:
    question: str
    gold: str  # "yes" or "no"


@dataclass(frozen=True)
class ManifestEntry:
    image_id: str
    path: Path
    label: str
    prompt: str
    task: str
    qa_pairs: tuple[QaPair, ...] = ()

    @property
    def question_count(self) -> int:
        return 2 if self.task == TASK_MME_PAIR else 1

    def question(self, index: int) -> str:
        """Prompt text for the given question index."""
        if self.task == TASK_MME_PAIR:
            return self.qa_pairs[index].question
        if index != 0:
            raise IndexError("exact-match entries have a single question")
        return self.prompt


@dataclass
class DatasetManifest:
    dataset_name: str
    entries: list[ManifestEntry] = field(default_factory=list)


def _entry_from_obj(obj: dict, base_dir: Path, line_no: int) -> ManifestEntry:
    def bad(msg: str) -> ManifestError:
        return ManifestError(f"manifest line {line_no}: {msg}")

    for required in ("image_id", "path", "prompt", "task"):
        if required not in obj:
            raise bad(f"missing field {required!r}")
    task = obj["task"]
    if task not in _TASKS:
        raise bad(f"task must be one of {_TASKS}, got {task!r}")
    label = obj.get("label", "")
    qa_pairs: tuple[QaPair, ...] = ()
    if task == TASK_EXACT_MATCH:
        if not isinstance(label, str) or not label.strip():
            raise bad("exact_match entries need a non-empty label")
    else:
        raw = obj.get("qa_pairs")
        if not isinstance(raw, list) or len(raw) != 2:
            raise bad("mme_pair entries need exactly two qa_pairs")
        pairs = []
        for qp in raw:
            if (
                not isinstance(qp, (list, tuple))
                or len(qp) != 2
                or not all(isinstance(x, str) for x in qp)
            ):
                raise bad("each qa_pair must be [question, gold]")
            question, gold = qp
            gold = gold.strip().lower()
            if gold not in ("yes", "no"):
                raise bad(f"qa_pair gold must be yes/no, got {gold!r}")
            pairs.append(QaPair(question, gold))
        qa_pairs = tuple(pairs)
    path = Path(obj["path"])
    if not path.is_absolute():
        path = base_dir / path
    return ManifestEntry(
        image_id=str(obj["image_id"]),
        path=path,
        label=label,
        prompt=str(obj["prompt"]),
        task=task,
        qa_pairs=qa_pairs,
    )


def load_manifest(path: str | Path, dataset_name: str | None = None) -> DatasetManifest:
    """Parse and validate a manifest file; duplicate image ids are rejected."""
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"manifest not found: {p}")
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(p, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"manifest line {line_no}: invalid JSON: {exc}")
            if not isinstance(obj, dict):
                raise ManifestError(f"manifest line {line_no}: record must be an object")
            entry = _entry_from_obj(obj, p.parent, line_no)
            if entry.image_id in seen:
                raise ManifestError(
                    f"manifest line {line_no}: duplicate image_id "
                    f"{entry.image_id!r}"
                )
            seen.add(entry.image_id)
            entries.append(entry)
    if not entries:
        raise ManifestError(f"manifest {p} contains no entries")
    return DatasetManifest(dataset_name or p.stem, entries)
