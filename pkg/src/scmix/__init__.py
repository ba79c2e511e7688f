"""Spatial colour mixing toolkit.

Deterministic colour-mixing distortions for images, low-pass recovery
preprocessing, similarity diagnostics, and an endpoint evaluation harness.
"""

from .backend import ACTIVE_BACKEND
from .colour import (
    OstwaldWeights,
    RationalColor,
    RgbColor,
    largest_remainder_partition,
    luminance,
    ostwald_decompose,
    ostwald_recompose,
    round_half_up,
)
from .illusions import DistortionSpec, IllusionVariant
from .illusions import apply as apply_distortion
from .metrics import cosine_similarity, histogram_correlation, ssim
from .preprocess import PreprocessSpec, box_blur, down_up, resize_canonical

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND",
    "DistortionSpec",
    "IllusionVariant",
    "OstwaldWeights",
    "PreprocessSpec",
    "RationalColor",
    "RgbColor",
    "apply_distortion",
    "box_blur",
    "cosine_similarity",
    "down_up",
    "histogram_correlation",
    "largest_remainder_partition",
    "luminance",
    "ostwald_decompose",
    "ostwald_recompose",
    "resize_canonical",
    "round_half_up",
    "ssim",
]
