"""Exact colour arithmetic shared by all distortion variants.

Everything here is integer or rational. Quantising a rational value onto the
8-bit lattice always goes through the same rule (round half up), so the pixel
kernels, the reference routines below, and any re-implementation in another
language agree bit for bit.

The Ostwald-style split expresses a colour as exact black/white/hue weights
plus the fully saturated hue colour; recomposing the weights reproduces the
input exactly because no intermediate value is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence, Union

Rational = Union[int, Fraction]

#: Per-mille Rec.601 luma weights for (r, g, b).
LUMA_WEIGHTS_PER_MILLE = (299, 587, 114)


class RgbColor(NamedTuple):
    """8-bit sRGB triple, each channel in 0..255."""

    r: int
    g: int
    b: int


#: Greyscale value in 0..255.
Luma = int


class RationalColor(NamedTuple):
    """Colour with exact rational channels in [0, 255].

    Used wherever a mean colour must survive unrounded (patch means, full-hue
    channels) until the final quantisation step.
    """

    r: Fraction
    g: Fraction
    b: Fraction

    def rounded(self) -> RgbColor:
        return RgbColor(
            round_half_up(self.r), round_half_up(self.g), round_half_up(self.b)
        )


#: full_hue placeholder for achromatic colours (hue weight zero). It is never
#: rendered; a fixed value keeps serialised decompositions deterministic.
ACHROMATIC_FULL_HUE = RationalColor(Fraction(255), Fraction(255), Fraction(255))


class OstwaldWeights(NamedTuple):
    """Exact (black, white, hue) weights of a colour plus its full hue.

    Invariants: the three weights are in [0, 1] and sum to exactly 1. When
    ``hue_w > 0`` the full-hue colour has min channel 0 and max channel 255;
    otherwise it is :data:`ACHROMATIC_FULL_HUE`.
    """

    black_w: Fraction
    white_w: Fraction
    hue_w: Fraction
    full_hue: RationalColor


def round_half_up(value: Rational) -> int:
    """Nearest integer, with halves rounded towards +infinity."""
    f = Fraction(value)
    return (2 * f.numerator + f.denominator) // (2 * f.denominator)


def _check_channel(x: int) -> int:
    if not 0 <= x <= 255:
        raise ValueError(f"channel value {x} outside 0..255")
    return x


def luminance(c: RgbColor) -> Luma:
    """Rec.601 luma of an 8-bit colour, rounded half up.

    Computed as (299*r + 587*g + 114*b) / 1000 in exact integer arithmetic.
    """
    r, g, b = (_check_channel(x) for x in c)
    return (299 * r + 587 * g + 114 * b + 500) // 1000


def ostwald_decompose(c: RgbColor) -> OstwaldWeights:
    """Split a colour into exact black/white/hue weights and its full hue.

    white = min/255, black = (255 - max)/255, hue = (max - min)/255. The
    full-hue colour stretches the chromatic part so that its min channel is 0
    and its max channel is 255, kept as exact rationals.
    """
    r, g, b = (_check_channel(x) for x in c)
    mx = max(r, g, b)
    mn = min(r, g, b)
    black = Fraction(255 - mx, 255)
    white = Fraction(mn, 255)
    hue = Fraction(mx - mn, 255)
    if mx == mn:
        full_hue = ACHROMATIC_FULL_HUE
    else:
        span = mx - mn
        full_hue = RationalColor(
            Fraction((r - mn) * 255, span),
            Fraction((g - mn) * 255, span),
            Fraction((b - mn) * 255, span),
        )
    return OstwaldWeights(black, white, hue, full_hue)


def ostwald_recompose(w: OstwaldWeights) -> RgbColor:
    """Rebuild the 8-bit colour from its weights.

    Each channel is round_half_up(white*255 + hue*full_hue). For weights
    produced by :func:`ostwald_decompose` the inner expression is already an
    integer, so the round trip is exact.
    """
    if w.black_w + w.white_w + w.hue_w != 1:
        raise ValueError("Ostwald weights must sum to exactly 1")
    base = w.white_w * 255
    return RgbColor(
        round_half_up(base + w.hue_w * w.full_hue.r),
        round_half_up(base + w.hue_w * w.full_hue.g),
        round_half_up(base + w.hue_w * w.full_hue.b),
    )


def largest_remainder_partition(
    total: int, weights: Sequence[Rational]
) -> list[int]:
    """Split ``total`` units among parts proportional to ``weights``.

    Classic largest-remainder apportionment: every part gets the floor of its
    exact share, then the leftover units go to the parts with the largest
    fractional remainders, ties broken by the lowest index. Guarantees the
    parts sum to ``total`` and each deviates from its exact share by < 1.
    """
    if total < 1:
        raise ValueError("total must be >= 1")
    ws = [Fraction(w) for w in weights]
    if any(w < 0 for w in ws):
        raise ValueError("weights must be non-negative")
    if sum(ws) != 1:
        raise ValueError("weights must sum to exactly 1")
    quotas = [total * w for w in ws]
    parts = [int(q) for q in quotas]  # floor: quotas are non-negative
    remainders = [q - p for q, p in zip(quotas, parts)]
    leftover = total - sum(parts)
    order = sorted(range(len(ws)), key=lambda i: (-remainders[i], i))
    for i in order[:leftover]:
        parts[i] += 1
    return parts
