"""The eight spatial colour mixing transforms.

Every transform is a pure function of (image, degree), plus a seed for the
randomised grid variant, and preserves the image dimensions. ``degree`` is
the stripe width in pixels for the stripe variants and the patch/block side
for the grid variants; degree 1 means "no distortion" and returns the input
unchanged for every variant.

Variant summary:

* ``SCMIX_3A``: vertical stripes cycling through the R, G, B channels; each
  stripe carries the pixel luma in its channel and zero elsewhere.
* ``SCMIX_2``: two-stripe cycle, yellow (R+G) and blue.
* ``SCMIX_1``: greyscale patches with one centred stripe filled with the
  patch mean colour.
* ``SCMIX_3B``: like SCMIX_1, but the stripe splits into R/G/B segments with
  heights proportional to the patch channel means.
* ``SCMIX_6``: six segments (R, G, B, C, Y, M); secondary weights are the
  pairwise minima of the channel means.
* ``OSTWALD_RGB``: vertical black/white/hue line triples per row whose
  width-weighted mean reproduces the local mean colour.
* ``OSTWALD_CHECKER``: grid blocks split into black|white|hue columns whose
  area-weighted mean reproduces the block mean colour.
* ``OSTWALD_RANDOM``: like the checker but black and white swap order per
  block with probability 1/2 (deterministic in the seed).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import backend
from ._pure import luma_plane

_UINT64_MASK = 0xFFFFFFFFFFFFFFFF


class IllusionVariant(str, enum.Enum):
    """Closed set of the eight transform variants."""

    SCMIX_1 = "scmix-1"
    SCMIX_2 = "scmix-2"
    SCMIX_3A = "scmix-3a"
    SCMIX_3B = "scmix-3b"
    SCMIX_6 = "scmix-6"
    OSTWALD_RGB = "ostwald-rgb"
    OSTWALD_CHECKER = "ostwald-checker"
    OSTWALD_RANDOM = "ostwald-random"

    @classmethod
    def parse(cls, value: str) -> "IllusionVariant":
        try:
            return cls(value)
        except ValueError:
            valid = ", ".join(v.value for v in cls)
            raise ValueError(
                f"unknown variant {value!r}; expected one of: {valid}"
            ) from None


@dataclass(frozen=True)
class DistortionSpec:
    """Variant + degree + seed; fully determines a transform."""

    variant: IllusionVariant
    degree: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if not 0 <= self.seed <= _UINT64_MASK:
            raise ValueError("seed must fit in 64 unsigned bits")


def _require_rgb(img: np.ndarray) -> np.ndarray:
    if not isinstance(img, np.ndarray):
        raise TypeError("image must be a numpy array")
    if img.ndim != 3 or img.shape[2] != 3 or img.dtype != np.uint8:
        raise ValueError("image must be (H, W, 3) uint8")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    return np.ascontiguousarray(img)


def _require_degree(degree: int) -> None:
    if degree < 2:
        raise ValueError("variant transforms need degree >= 2; degree 1 is "
                         "the identity and is handled by apply()")


def scmix_3a(img: np.ndarray, degree: int) -> np.ndarray:
    """Vertical R/G/B luma stripes of the given width."""
    img = _require_rgb(img)
    _require_degree(degree)
    h, w = img.shape[:2]
    luma = luma_plane(img)
    channel = (np.arange(w) // degree) % 3
    out = np.zeros((h, w, 3), dtype=np.int64)
    out[:, np.arange(w), channel] = luma
    return out.astype(np.uint8)


def scmix_2(img: np.ndarray, degree: int) -> np.ndarray:
    """Alternating yellow (R+G) and blue luma stripes."""
    img = _require_rgb(img)
    _require_degree(degree)
    h, w = img.shape[:2]
    luma = luma_plane(img)
    yellow = ((np.arange(w) // degree) % 2) == 0
    out = np.zeros((h, w, 3), dtype=np.int64)
    out[:, yellow, 0] = luma[:, yellow]
    out[:, yellow, 1] = luma[:, yellow]
    out[:, ~yellow, 2] = luma[:, ~yellow]
    return out.astype(np.uint8)


def scmix_1(img: np.ndarray, degree: int) -> np.ndarray:
    """Greyscale patches with a centred patch-mean colour stripe."""
    img = _require_rgb(img)
    _require_degree(degree)
    return backend.scmix_1(img, degree)


def scmix_3b(img: np.ndarray, degree: int) -> np.ndarray:
    """Patch stripe split into R/G/B segments proportional to channel means."""
    img = _require_rgb(img)
    _require_degree(degree)
    return backend.scmix_3b(img, degree)


def scmix_6(img: np.ndarray, degree: int) -> np.ndarray:
    """Patch stripe split into R/G/B/C/Y/M proportional segments."""
    img = _require_rgb(img)
    _require_degree(degree)
    return backend.scmix_6(img, degree)


def ostwald_rgb(img: np.ndarray, degree: int) -> np.ndarray:
    """Per-row black/white/hue line triples of total width 3*degree."""
    img = _require_rgb(img)
    _require_degree(degree)
    return backend.ostwald_rgb(img, degree)


def ostwald_checker(img: np.ndarray, degree: int) -> np.ndarray:
    """Grid blocks rendered as black|white|hue column runs."""
    img = _require_rgb(img)
    _require_degree(degree)
    return backend.ostwald_checker(img, degree)


def ostwald_random(img: np.ndarray, degree: int, seed: int) -> np.ndarray:
    """Checker with per-block random black/white order (seed-deterministic)."""
    img = _require_rgb(img)
    _require_degree(degree)
    if not 0 <= seed <= _UINT64_MASK:
        raise ValueError("seed must fit in 64 unsigned bits")
    return backend.ostwald_random(img, degree, seed)


def apply(spec: DistortionSpec, img: np.ndarray) -> np.ndarray:
    """Apply the transform described by ``spec``; degree 1 is the identity."""
    img = _require_rgb(img)
    if spec.degree == 1:
        return img.copy()
    v = spec.variant
    if v is IllusionVariant.SCMIX_1:
        return scmix_1(img, spec.degree)
    if v is IllusionVariant.SCMIX_2:
        return scmix_2(img, spec.degree)
    if v is IllusionVariant.SCMIX_3A:
        return scmix_3a(img, spec.degree)
    if v is IllusionVariant.SCMIX_3B:
        return scmix_3b(img, spec.degree)
    if v is IllusionVariant.SCMIX_6:
        return scmix_6(img, spec.degree)
    if v is IllusionVariant.OSTWALD_RGB:
        return ostwald_rgb(img, spec.degree)
    if v is IllusionVariant.OSTWALD_CHECKER:
        return ostwald_checker(img, spec.degree)
    if v is IllusionVariant.OSTWALD_RANDOM:
        return ostwald_random(img, spec.degree, spec.seed)
    raise ValueError(f"unhandled variant {v!r}")  # pragma: no cover
