"""Canonical resize and the two low-pass recovery operations.

``down_up`` (area-mean downscale followed by bilinear upscale) and
``box_blur`` imitate the squinting / step-back strategies that make the
striped distortions readable again. Both preserve constant images exactly and
never widen the per-channel value range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .illusions import _require_rgb

CANONICAL_SIZE = 360


def resize_canonical(img: np.ndarray) -> np.ndarray:
    """Bilinear resample to the canonical 360x360 working resolution."""
    img = _require_rgb(img)
    if img.shape[0] == CANONICAL_SIZE and img.shape[1] == CANONICAL_SIZE:
        return img.copy()
    return backend.bilinear_resize(img, CANONICAL_SIZE, CANONICAL_SIZE)


def down_up(img: np.ndarray, factor: int) -> np.ndarray:
    """Area-mean downscale by ``factor`` then bilinear upscale back.

    The downscaled size is (ceil(h/factor), ceil(w/factor)); factor 1 is the
    identity. ``factor`` may not exceed the smaller image dimension.
    """
    img = _require_rgb(img)
    if factor < 1:
        raise ValueError("down/up factor must be >= 1")
    h, w = img.shape[:2]
    if factor > min(h, w):
        raise ValueError(
            f"down/up factor {factor} exceeds the smaller image dimension "
            f"{min(h, w)}"
        )
    if factor == 1:
        return img.copy()
    small = backend.area_downscale(img, factor)
    return backend.bilinear_resize(small, h, w)


def box_blur(img: np.ndarray, kernel: int) -> np.ndarray:
    """Uniform kernel x kernel mean with replicate borders; kernel 1 is a copy."""
    img = _require_rgb(img)
    if kernel < 1 or kernel % 2 == 0:
        raise ValueError("box blur kernel must be odd and >= 1")
    return backend.box_blur(img, kernel)


@dataclass(frozen=True)
class PreprocessSpec:
    """One low-pass step: nothing, down/up by a factor, or a box blur.

    The compact tag form ("none", "du8", "blur9") names sweep axes and result
    rows.
    """

    kind: str  # "none" | "down_up" | "box_blur"
    value: int = 0

    def __post_init__(self) -> None:
        if self.kind == "none":
            return
        if self.kind == "down_up":
            if self.value < 1:
                raise ValueError("down/up factor must be >= 1")
        elif self.kind == "box_blur":
            if self.value < 1 or self.value % 2 == 0:
                raise ValueError("box blur kernel must be odd and >= 1")
        else:
            raise ValueError(f"unknown preprocess kind {self.kind!r}")

    @classmethod
    def none(cls) -> "PreprocessSpec":
        return cls("none")

    @classmethod
    def down_up(cls, factor: int) -> "PreprocessSpec":
        return cls("down_up", factor)

    @classmethod
    def box_blur(cls, kernel: int) -> "PreprocessSpec":
        return cls("box_blur", kernel)

    @classmethod
    def parse(cls, tag: str) -> "PreprocessSpec":
        t = tag.strip().lower()
        if t == "none":
            return cls.none()
        if t.startswith("du") and t[2:].isdigit():
            return cls.down_up(int(t[2:]))
        if t.startswith("blur") and t[4:].isdigit():
            return cls.box_blur(int(t[4:]))
        raise ValueError(
            f"cannot parse preprocess tag {tag!r} (expected 'none', 'duF' or "
            "'blurK')"
        )

    @property
    def tag(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "down_up":
            return f"du{self.value}"
        return f"blur{self.value}"

    def apply(self, img: np.ndarray) -> np.ndarray:
        if self.kind == "none":
            return img.copy()
        if self.kind == "down_up":
            return down_up(img, self.value)
        return box_blur(img, self.value)
