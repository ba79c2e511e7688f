"""Response scoring: exact-match containment and MME-style yes/no pairs."""

from __future__ import annotations

import re


def score_exact_match(response: str, label: str) -> bool:
    """True when the label occurs in the response as a whole phrase.

    Case-insensitive, whitespace-normalised; the label must appear as a
    contiguous token sequence at word boundaries, so "cat" does not match
    "cattle" but does match "a CAT." and multi-word labels match as phrases.
    """
    if not label or not label.strip():
        raise ValueError("label must be non-empty")
    tokens = label.split()
    pattern = r"(?<!\w)" + r"\s+".join(re.escape(t) for t in tokens) + r"(?!\w)"
    normalised = " ".join(response.split())
    return re.search(pattern, normalised, re.IGNORECASE) is not None


_YES_NO = re.compile(r"(?<!\w)(yes|no)(?!\w)", re.IGNORECASE)


def parse_yes_no(response: str) -> str | None:
    """First standalone yes/no token, lowercased; None when unparseable."""
    m = _YES_NO.search(response)
    return m.group(1).lower() if m else None


def score_mme(
    responses: tuple[str, str], golds: tuple[str, str]
) -> tuple[tuple[bool, bool], bool]:
    """Score one image's two yes/no questions.

    Returns the per-question correctness pair (the two "acc" contributions)
    and the both-correct flag ("acc+"). Unparseable responses count as
    incorrect.
    """
    if len(responses) != 2 or len(golds) != 2:
        raise ValueError("MME scoring needs exactly two responses and golds")
    verdicts = tuple(parse_yes_no(r) for r in responses)
    correct = tuple(
        v is not None and v == g.strip().lower()
        for v, g in zip(verdicts, golds)
    )
    return correct, correct[0] and correct[1]
