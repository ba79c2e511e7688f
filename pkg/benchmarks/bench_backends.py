"""Benchmark the compiled kernels against the pure NumPy fallback.

Usage: python benchmarks/bench_backends.py [--size 360] [--reps 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from scmix import backend


def best_of(fn, reps):
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=360)
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args()

    impls = backend.available_backends()
    if "compiled" not in impls:
        raise SystemExit("compiled extension not built; nothing to compare")
    pure, compiled = impls["pure"], impls["compiled"]

    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, (args.size, args.size, 3), dtype=np.uint8)
    half = args.size // 2

    cases = {
        "bilinear_resize (down 2x)": lambda im: ("bilinear_resize", (im, half, half)),
        "bilinear_resize (up 2x)": lambda im: ("bilinear_resize", (im, args.size * 2, args.size * 2)),
        "area_downscale (8x)": lambda im: ("area_downscale", (im, 8)),
        "box_blur (k=9)": lambda im: ("box_blur", (im, 9)),
        "scmix_1 (d=8)": lambda im: ("scmix_1", (im, 8)),
        "scmix_3b (d=8)": lambda im: ("scmix_3b", (im, 8)),
        "scmix_6 (d=8)": lambda im: ("scmix_6", (im, 8)),
        "ostwald_checker (d=8)": lambda im: ("ostwald_checker", (im, 8)),
        "ostwald_random (d=8)": lambda im: ("ostwald_random", (im, 8, 1)),
        "ostwald_rgb (d=4)": lambda im: ("ostwald_rgb", (im, 4)),
    }

    print(f"image {args.size}x{args.size}, best of {args.reps}\n")
    print(f"{'kernel':<28} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for label, make in cases.items():
        name, call_args = make(img)
        sanity = np.array_equal(
            getattr(pure, name)(*call_args), getattr(compiled, name)(*call_args)
        )
        t_pure = best_of(lambda: getattr(pure, name)(*call_args), args.reps)
        t_comp = best_of(lambda: getattr(compiled, name)(*call_args), args.reps)
        note = "" if sanity else "  !! outputs differ"
        print(
            f"{label:<28} {t_pure * 1e3:>10.2f} {t_comp * 1e3:>14.2f} "
            f"{t_pure / t_comp:>7.1f}x{note}"
        )


if __name__ == "__main__":
    main()
