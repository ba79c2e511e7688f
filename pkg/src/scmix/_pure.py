"""NumPy implementations of the pixel kernels.

Images are (H, W, 3) uint8 arrays. All arithmetic is exact integer math; the
only quantisation is round-half-up, written as (2*num + den) // (2*den). The
compiled extension (``_kernels.pyx``) mirrors every routine here and the two
backends must produce bit-identical output.
"""

from __future__ import annotations

import numpy as np

NAME = "pure"

_SPLITMIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SPLITMIX_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SPLITMIX_M2 = np.uint64(0x94D049BB133111EB)

_PRIMARY_FILLS = np.array(
    [[255, 0, 0], [0, 255, 0], [0, 0, 255]], dtype=np.int64
)
_SIX_FILLS = np.array(
    [
        [255, 0, 0],
        [0, 255, 0],
        [0, 0, 255],
        [0, 255, 255],
        [255, 255, 0],
        [255, 0, 255],
    ],
    dtype=np.int64,
)


def _round_div(num, den):
    # round-half-up division of non-negative integers
    return (2 * num + den) // (2 * den)


def luma_plane(img: np.ndarray) -> np.ndarray:
    """Rec.601 luma of every pixel as an (H, W) int64 plane."""
    p = img.astype(np.int64)
    return (299 * p[..., 0] + 587 * p[..., 1] + 114 * p[..., 2] + 500) // 1000


# ---------------------------------------------------------------------------
# resampling


def _sample_axis(dst: int, src: int):
    # Half-pixel-centred source position of output index i is
    # ((2i + 1) * src - dst) / (2 * dst), kept as an exact rational.
    num = (2 * np.arange(dst, dtype=np.int64) + 1) * src - dst
    den = 2 * dst
    lo = num // den  # floor; num may be negative at the left edge
    frac = num - lo * den  # fractional numerator in [0, den)
    hi = np.clip(lo + 1, 0, src - 1)
    lo = np.clip(lo, 0, src - 1)
    return lo, hi, frac, den


def bilinear_resize(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample to (out_h, out_w), clamp-to-edge, exact rational."""
    h, w = img.shape[:2]
    y0, y1, fy, dy = _sample_axis(out_h, h)
    x0, x1, fx, dx = _sample_axis(out_w, w)
    p = img.astype(np.int64)
    wx0 = (dx - fx)[None, :, None]
    wx1 = fx[None, :, None]
    top = p[y0][:, x0] * wx0 + p[y0][:, x1] * wx1
    bot = p[y1][:, x0] * wx0 + p[y1][:, x1] * wx1
    acc = top * (dy - fy)[:, None, None] + bot * fy[:, None, None]
    return _round_div(acc, dx * dy).astype(np.uint8)


def area_downscale(img: np.ndarray, factor: int) -> np.ndarray:
    """Mean over factor x factor boxes; trailing boxes are clipped."""
    h, w = img.shape[:2]
    p = img.astype(np.int64)
    ys = np.arange(0, h, factor)
    xs = np.arange(0, w, factor)
    sums = np.add.reduceat(np.add.reduceat(p, ys, axis=0), xs, axis=1)
    bh = np.minimum(ys + factor, h) - ys
    bw = np.minimum(xs + factor, w) - xs
    area = (bh[:, None] * bw[None, :])[..., None]
    return _round_div(sums, area).astype(np.uint8)


def box_blur(img: np.ndarray, kernel: int) -> np.ndarray:
    """Mean over a kernel x kernel window with replicate borders."""
    if kernel == 1:
        return img.copy()
    r = kernel // 2
    h, w = img.shape[:2]
    p = np.pad(img, ((r, r), (r, r), (0, 0)), mode="edge").astype(np.int64)
    c = np.zeros((h + 2 * r + 1, w + 2 * r + 1, 3), dtype=np.int64)
    c[1:, 1:] = p.cumsum(axis=0).cumsum(axis=1)
    k = kernel
    sums = c[k:, k:] - c[:-k, k:] - c[k:, :-k] + c[:-k, :-k]
    return _round_div(sums, k * k).astype(np.uint8)


# ---------------------------------------------------------------------------
# shared transform machinery


def _apportion(total, nums, denom):
    """Vectorised largest-remainder split over the trailing axis.

    ``total`` (...,) units are divided among k parts proportional to
    ``nums / denom`` (``nums``: (..., k) non-negative int64, ``denom``: (...)
    positive int64). Ties in the remainders go to the lowest part index,
    matching :func:`scmix.colour.largest_remainder_partition`.
    """
    k = nums.shape[-1]
    q = total[..., None] * nums
    d = denom[..., None]
    base = q // d
    rem = q - base * d
    extra = total - base.sum(axis=-1)
    idx = np.arange(k)
    # beats[..., i, j]: part j outranks part i for a leftover unit
    beats = (rem[..., None, :] > rem[..., :, None]) | (
        (rem[..., None, :] == rem[..., :, None]) & (idx[None, :] < idx[:, None])
    )
    rank = beats.sum(axis=-1)
    return base + (rank < extra[..., None])


def _grid_sums(img: np.ndarray, step_y: int, step_x: int):
    """Per-cell channel sums of a step_y x step_x grid (edges clipped)."""
    h, w = img.shape[:2]
    ys = np.arange(0, h, step_y)
    xs = np.arange(0, w, step_x)
    p = img.astype(np.int64)
    sums = np.add.reduceat(np.add.reduceat(p, ys, axis=0), xs, axis=1)
    ch = np.minimum(ys + step_y, h) - ys
    cw = np.minimum(xs + step_x, w) - xs
    return sums, ch, cw


def _stripe_geometry(degree: int, pw: np.ndarray):
    # centred chroma stripe: width ceil(degree/2) clipped to the patch
    sw = np.minimum((degree + 1) // 2, pw)
    off = (pw - sw) // 2
    return sw, off


# ---------------------------------------------------------------------------
# patch variants


def scmix_1(img: np.ndarray, degree: int) -> np.ndarray:
    h, w = img.shape[:2]
    base = luma_plane(img)
    sums, ph, pw = _grid_sums(img, degree, degree)
    area = (ph[:, None] * pw[None, :])[..., None]
    fill = _round_div(sums, area)  # per-patch mean colour
    sw, off = _stripe_geometry(degree, pw)
    ys = np.arange(h)
    xs = np.arange(w)
    pi = ys // degree
    pj = xs // degree
    cx = xs - pj * degree
    in_stripe = (cx >= off[pj]) & (cx < off[pj] + sw[pj])
    out = np.repeat(base[:, :, None], 3, axis=2)
    fill_px = fill[pi[:, None], pj[None, :]]
    out = np.where(in_stripe[None, :, None], fill_px, out)
    return out.astype(np.uint8)


def _proportional_stripes(img, degree, nums, fills):
    """Greyscale base with a centred stripe split into proportional segments."""
    h, w = img.shape[:2]
    base = luma_plane(img)
    _, ph, pw = _grid_sums(img, degree, degree)
    tot = nums.sum(axis=-1)
    safe_tot = np.where(tot > 0, tot, 1)
    heights = _apportion(
        np.broadcast_to(ph[:, None], tot.shape), nums, safe_tot
    )
    bounds = np.cumsum(heights, axis=-1)
    sw, off = _stripe_geometry(degree, pw)
    ys = np.arange(h)
    xs = np.arange(w)
    pi = ys // degree
    pj = xs // degree
    ry = ys - pi * degree
    cx = xs - pj * degree
    in_stripe = (cx >= off[pj]) & (cx < off[pj] + sw[pj])
    bounds_px = bounds[pi[:, None], pj[None, :]]  # (H, W, k)
    seg = (ry[:, None, None] >= bounds_px[..., :-1]).sum(axis=-1)
    fill_px = fills[seg]
    grey = np.repeat(base[:, :, None], 3, axis=2)
    mask = in_stripe[None, :, None] & (tot[pi[:, None], pj[None, :]] > 0)[..., None]
    return np.where(mask, fill_px, grey).astype(np.uint8)


def scmix_3b(img: np.ndarray, degree: int) -> np.ndarray:
    sums, _, _ = _grid_sums(img, degree, degree)
    return _proportional_stripes(img, degree, sums, _PRIMARY_FILLS)


def scmix_6(img: np.ndarray, degree: int) -> np.ndarray:
    s, _, _ = _grid_sums(img, degree, degree)
    cyan = np.minimum(s[..., 1], s[..., 2])
    yellow = np.minimum(s[..., 0], s[..., 1])
    magenta = np.minimum(s[..., 0], s[..., 2])
    nums = np.concatenate(
        [s, np.stack([cyan, yellow, magenta], axis=-1)], axis=-1
    )
    return _proportional_stripes(img, degree, nums, _SIX_FILLS)


# ---------------------------------------------------------------------------
# Ostwald variants


def _ostwald_tables(mean_rgb: np.ndarray):
    """Per-cell partition numerators (black, white, hue over 255) and hue fill."""
    mx = mean_rgb.max(axis=-1)
    mn = mean_rgb.min(axis=-1)
    nums = np.stack([255 - mx, mn, mx - mn], axis=-1)
    span = np.where(mx > mn, mx - mn, 1)[..., None]
    fh = _round_div((mean_rgb - mn[..., None]) * 255, span)
    fh = np.where((mx > mn)[..., None], fh, 255)  # sentinel, never rendered
    return nums, fh


def _mix64(z):
    with np.errstate(over="ignore"):  # modular 64-bit wrap is intended
        z = z + _SPLITMIX_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _SPLITMIX_M1
        z = (z ^ (z >> np.uint64(27))) * _SPLITMIX_M2
        return z ^ (z >> np.uint64(31))


def swap_grid(seed: int, n_rows: int, n_cols: int) -> np.ndarray:
    """Per-block black/white swap decisions for the randomised grid variant.

    Bit 0 of splitmix64(splitmix64(splitmix64(seed) ^ row) ^ col): a pure
    function of (seed, block coordinates), so rendering order never matters.
    """
    rows = np.arange(n_rows, dtype=np.uint64)[:, None]
    cols = np.arange(n_cols, dtype=np.uint64)[None, :]
    word = _mix64(_mix64(_mix64(np.uint64(seed)) ^ rows) ^ cols)
    return (word & np.uint64(1)).astype(bool)


def _ostwald_grid(img, degree, swap):
    h, w = img.shape[:2]
    sums, ph, pw = _grid_sums(img, degree, degree)
    area = (ph[:, None] * pw[None, :])[..., None]
    mean = _round_div(sums, area)
    nums, fh = _ostwald_tables(mean)
    shape = mean.shape[:2]
    widths = _apportion(
        np.broadcast_to(pw[None, :], shape),
        nums,
        np.full(shape, 255, dtype=np.int64),
    )
    black = np.zeros_like(mean)
    white = np.full_like(mean, 255)
    tbl = np.stack([black, white, fh], axis=-2)  # (..., region, channel)
    if swap is not None:
        sw = swap[..., None]
        widths = np.where(sw, widths[..., [1, 0, 2]], widths)
        tbl = np.where(sw[..., None], tbl[..., [1, 0, 2], :], tbl)
    bounds = np.cumsum(widths, axis=-1)
    ys = np.arange(h)
    xs = np.arange(w)
    pi = ys // degree
    pj = xs // degree
    cx = (xs - pj * degree)[None, :]
    b0 = bounds[..., 0][pi[:, None], pj[None, :]]
    b1 = bounds[..., 1][pi[:, None], pj[None, :]]
    region = (cx >= b0).astype(np.int64) + (cx >= b1)
    pi2 = np.broadcast_to(pi[:, None], (h, w))
    pj2 = np.broadcast_to(pj[None, :], (h, w))
    return tbl[pi2, pj2, region].astype(np.uint8)


def ostwald_checker(img: np.ndarray, degree: int) -> np.ndarray:
    return _ostwald_grid(img, degree, None)


def ostwald_random(img: np.ndarray, degree: int, seed: int) -> np.ndarray:
    h, w = img.shape[:2]
    n_rows = -(-h // degree)
    n_cols = -(-w // degree)
    return _ostwald_grid(img, degree, swap_grid(seed, n_rows, n_cols))


def ostwald_rgb(img: np.ndarray, degree: int) -> np.ndarray:
    h, w = img.shape[:2]
    group = 3 * degree
    xs_b = np.arange(0, w, group)
    p = img.astype(np.int64)
    sums = np.add.reduceat(p, xs_b, axis=1)  # (H, G, 3)
    gw = np.minimum(xs_b + group, w) - xs_b
    mean = _round_div(sums, gw[None, :, None])
    nums, fh = _ostwald_tables(mean)
    shape = mean.shape[:2]
    widths = _apportion(
        np.broadcast_to(gw[None, :], shape),
        nums,
        np.full(shape, 255, dtype=np.int64),
    )
    bounds = np.cumsum(widths, axis=-1)
    xs = np.arange(w)
    gj = xs // group
    cx = (xs - gj * group)[None, :]
    region = (cx >= bounds[..., 0][:, gj]).astype(np.int64) + (
        cx >= bounds[..., 1][:, gj]
    )
    r3 = region[..., None]
    fh_px = fh[:, gj]
    out = np.where(r3 == 0, 0, np.where(r3 == 1, 255, fh_px))
    return out.astype(np.uint8)
