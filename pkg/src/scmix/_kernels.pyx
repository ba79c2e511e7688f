# cython: language_level=3
"""Compiled pixel kernels. Bit-identical twins of ``scmix._pure``."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

NAME = "compiled"

cdef uint64_t _GAMMA = (<uint64_t>0x9E3779B9 << 32) | <uint64_t>0x7F4A7C15
cdef uint64_t _M1 = (<uint64_t>0xBF58476D << 32) | <uint64_t>0x1CE4E5B9
cdef uint64_t _M2 = (<uint64_t>0x94D049BB << 32) | <uint64_t>0x133111EB


cdef inline int64_t _floordiv(int64_t a, int64_t b) noexcept nogil:
    # b > 0; C division truncates, floor needed for negative a
    cdef int64_t q = a / b
    if a % b != 0 and a < 0:
        q -= 1
    return q


cdef inline int64_t _round_div(int64_t num, int64_t den) noexcept nogil:
    # round-half-up for non-negative num, positive den
    return (2 * num + den) / (2 * den)


cdef inline int64_t _luma(int64_t r, int64_t g, int64_t b) noexcept nogil:
    return (299 * r + 587 * g + 114 * b + 500) / 1000


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = z + _GAMMA
    z = (z ^ (z >> 30)) * _M1
    z = (z ^ (z >> 27)) * _M2
    return z ^ (z >> 31)


cdef inline void _apportion_k(int64_t total, int64_t* nums, int64_t denom,
                              int k, int64_t* out) noexcept nogil:
    # largest remainder, ties to the lowest index
    cdef int64_t rem[8]
    cdef int64_t q, extra, base_sum = 0
    cdef int i, j, rank
    for i in range(k):
        q = total * nums[i]
        out[i] = q / denom
        rem[i] = q - out[i] * denom
        base_sum += out[i]
    extra = total - base_sum
    if extra == 0:
        return
    for i in range(k):
        rank = 0
        for j in range(k):
            if rem[j] > rem[i] or (rem[j] == rem[i] and j < i):
                rank += 1
        if rank < extra:
            out[i] += 1


def luma_plane(const unsigned char[:, :, ::1] img):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_np
    cdef Py_ssize_t y, x
    with nogil:
        for y in range(h):
            for x in range(w):
                out[y, x] = _luma(img[y, x, 0], img[y, x, 1], img[y, x, 2])
    return out_np


# ---------------------------------------------------------------------------
# resampling


def bilinear_resize(const unsigned char[:, :, ::1] img, int out_h, int out_w):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((out_h, out_w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef int64_t dy = 2 * out_h, dx = 2 * out_w
    x0_np = np.empty(out_w, dtype=np.int64)
    x1_np = np.empty(out_w, dtype=np.int64)
    fx_np = np.empty(out_w, dtype=np.int64)
    y0_np = np.empty(out_h, dtype=np.int64)
    y1_np = np.empty(out_h, dtype=np.int64)
    fy_np = np.empty(out_h, dtype=np.int64)
    cdef int64_t[::1] x0 = x0_np, x1 = x1_np, fx = fx_np
    cdef int64_t[::1] y0 = y0_np, y1 = y1_np, fy = fy_np
    cdef Py_ssize_t i, y, x, c
    cdef int64_t num, lo, hi, acc, top, bot, wx0, wx1, wy0, wy1, den
    with nogil:
        for i in range(out_w):
            num = (2 * i + 1) * w - out_w
            lo = _floordiv(num, dx)
            fx[i] = num - lo * dx
            hi = lo + 1
            if hi > w - 1:
                hi = w - 1
            if hi < 0:
                hi = 0
            if lo > w - 1:
                lo = w - 1
            if lo < 0:
                lo = 0
            x0[i] = lo
            x1[i] = hi
        for i in range(out_h):
            num = (2 * i + 1) * h - out_h
            lo = _floordiv(num, dy)
            fy[i] = num - lo * dy
            hi = lo + 1
            if hi > h - 1:
                hi = h - 1
            if hi < 0:
                hi = 0
            if lo > h - 1:
                lo = h - 1
            if lo < 0:
                lo = 0
            y0[i] = lo
            y1[i] = hi
        den = dx * dy
        for y in range(out_h):
            wy1 = fy[y]
            wy0 = dy - wy1
            for x in range(out_w):
                wx1 = fx[x]
                wx0 = dx - wx1
                for c in range(3):
                    top = (<int64_t>img[y0[y], x0[x], c]) * wx0 + \
                          (<int64_t>img[y0[y], x1[x], c]) * wx1
                    bot = (<int64_t>img[y1[y], x0[x], c]) * wx0 + \
                          (<int64_t>img[y1[y], x1[x], c]) * wx1
                    acc = top * wy0 + bot * wy1
                    out[y, x, c] = <unsigned char>_round_div(acc, den)
    return out_np


def area_downscale(const unsigned char[:, :, ::1] img, int factor):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t oh = (h + factor - 1) // factor
    cdef Py_ssize_t ow = (w + factor - 1) // factor
    out_np = np.empty((oh, ow, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef Py_ssize_t by, bx, y, x, c, y0, y1, x0, x1
    cdef int64_t s, area
    with nogil:
        for by in range(oh):
            y0 = by * factor
            y1 = y0 + factor
            if y1 > h:
                y1 = h
            for bx in range(ow):
                x0 = bx * factor
                x1 = x0 + factor
                if x1 > w:
                    x1 = w
                area = <int64_t>(y1 - y0) * (x1 - x0)
                for c in range(3):
                    s = 0
                    for y in range(y0, y1):
                        for x in range(x0, x1):
                            s += img[y, x, c]
                    out[by, bx, c] = <unsigned char>_round_div(s, area)
    return out_np


def box_blur(const unsigned char[:, :, ::1] img, int kernel):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    if kernel == 1:
        return np.asarray(img).copy()
    cdef int r = kernel // 2
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    row_np = np.empty((h, w, 3), dtype=np.int64)
    cdef int64_t[:, :, ::1] rows = row_np
    cdef Py_ssize_t y, x, c, t, lo, hi
    cdef int64_t s, k2
    with nogil:
        # horizontal window sums with clamped indices
        for y in range(h):
            for c in range(3):
                s = 0
                for t in range(-r, r + 1):
                    lo = t
                    if lo < 0:
                        lo = 0
                    if lo > w - 1:
                        lo = w - 1
                    s += img[y, lo, c]
                rows[y, 0, c] = s
                for x in range(1, w):
                    lo = x - 1 - r
                    if lo < 0:
                        lo = 0
                    hi = x + r
                    if hi > w - 1:
                        hi = w - 1
                    s += img[y, hi, c] - img[y, lo, c]
                    rows[y, x, c] = s
        # vertical window sums of the horizontal sums
        k2 = <int64_t>kernel * kernel
        for x in range(w):
            for c in range(3):
                s = 0
                for t in range(-r, r + 1):
                    lo = t
                    if lo < 0:
                        lo = 0
                    if lo > h - 1:
                        lo = h - 1
                    s += rows[lo, x, c]
                out[0, x, c] = <unsigned char>_round_div(s, k2)
                for y in range(1, h):
                    lo = y - 1 - r
                    if lo < 0:
                        lo = 0
                    hi = y + r
                    if hi > h - 1:
                        hi = h - 1
                    s += rows[hi, x, c] - rows[lo, x, c]
                    out[y, x, c] = <unsigned char>_round_div(s, k2)
    return out_np


# ---------------------------------------------------------------------------
# patch variants

# R, G, B, C, Y, M fill colours; the first three triples double as the
# three-segment fill table
cdef unsigned char[18] _SIX_FILLS

def _init_fill_table():
    values = [255, 0, 0, 0, 255, 0, 0, 0, 255,
              0, 255, 255, 255, 255, 0, 255, 0, 255]
    cdef int i
    for i in range(18):
        _SIX_FILLS[i] = values[i]

_init_fill_table()
del _init_fill_table


def scmix_1(const unsigned char[:, :, ::1] img, int degree):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef Py_ssize_t py0, px0, y, x, c
    cdef Py_ssize_t ph, pw, sw, off, cx
    cdef int64_t area, lum
    cdef int64_t s[3]
    cdef unsigned char fill[3]
    with nogil:
        py0 = 0
        while py0 < h:
            ph = degree if py0 + degree <= h else h - py0
            px0 = 0
            while px0 < w:
                pw = degree if px0 + degree <= w else w - px0
                for c in range(3):
                    s[c] = 0
                for y in range(py0, py0 + ph):
                    for x in range(px0, px0 + pw):
                        for c in range(3):
                            s[c] += img[y, x, c]
                area = <int64_t>ph * pw
                for c in range(3):
                    fill[c] = <unsigned char>_round_div(s[c], area)
                sw = (degree + 1) // 2
                if sw > pw:
                    sw = pw
                off = (pw - sw) // 2
                for y in range(py0, py0 + ph):
                    for x in range(px0, px0 + pw):
                        cx = x - px0
                        if off <= cx < off + sw:
                            for c in range(3):
                                out[y, x, c] = fill[c]
                        else:
                            lum = _luma(img[y, x, 0], img[y, x, 1], img[y, x, 2])
                            for c in range(3):
                                out[y, x, c] = <unsigned char>lum
                px0 += degree
            py0 += degree
    return out_np


cdef void _stripe_patch(const unsigned char[:, :, ::1] img,
                        unsigned char[:, :, ::1] out,
                        Py_ssize_t py0, Py_ssize_t px0,
                        Py_ssize_t ph, Py_ssize_t pw,
                        int degree, int nseg,
                        int64_t* nums) noexcept nogil:
    cdef int64_t tot = 0
    cdef int64_t heights[8]
    cdef int64_t bounds[8]
    cdef Py_ssize_t y, x, c, cx, ry, sw, off
    cdef int seg
    cdef int64_t lum
    for seg in range(nseg):
        tot += nums[seg]
    if tot > 0:
        _apportion_k(<int64_t>ph, nums, tot, nseg, heights)
        bounds[0] = heights[0]
        for seg in range(1, nseg):
            bounds[seg] = bounds[seg - 1] + heights[seg]
    sw = (degree + 1) // 2
    if sw > pw:
        sw = pw
    off = (pw - sw) // 2
    for y in range(py0, py0 + ph):
        ry = y - py0
        for x in range(px0, px0 + pw):
            cx = x - px0
            if tot > 0 and off <= cx < off + sw:
                seg = 0
                while seg < nseg - 1 and ry >= bounds[seg]:
                    seg += 1
                for c in range(3):
                    out[y, x, c] = _SIX_FILLS[3 * seg + c]
            else:
                lum = _luma(img[y, x, 0], img[y, x, 1], img[y, x, 2])
                for c in range(3):
                    out[y, x, c] = <unsigned char>lum


def scmix_3b(const unsigned char[:, :, ::1] img, int degree):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef Py_ssize_t py0, px0, y, x, c, ph, pw
    cdef int64_t nums[3]
    with nogil:
        py0 = 0
        while py0 < h:
            ph = degree if py0 + degree <= h else h - py0
            px0 = 0
            while px0 < w:
                pw = degree if px0 + degree <= w else w - px0
                for c in range(3):
                    nums[c] = 0
                for y in range(py0, py0 + ph):
                    for x in range(px0, px0 + pw):
                        for c in range(3):
                            nums[c] += img[y, x, c]
                _stripe_patch(img, out, py0, px0, ph, pw, degree, 3, nums)
                px0 += degree
            py0 += degree
    return out_np


def scmix_6(const unsigned char[:, :, ::1] img, int degree):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef Py_ssize_t py0, px0, y, x, c, ph, pw
    cdef int64_t nums[6]
    with nogil:
        py0 = 0
        while py0 < h:
            ph = degree if py0 + degree <= h else h - py0
            px0 = 0
            while px0 < w:
                pw = degree if px0 + degree <= w else w - px0
                for c in range(3):
                    nums[c] = 0
                for y in range(py0, py0 + ph):
                    for x in range(px0, px0 + pw):
                        for c in range(3):
                            nums[c] += img[y, x, c]
                nums[3] = nums[1] if nums[1] < nums[2] else nums[2]  # cyan
                nums[4] = nums[0] if nums[0] < nums[1] else nums[1]  # yellow
                nums[5] = nums[0] if nums[0] < nums[2] else nums[2]  # magenta
                _stripe_patch(img, out, py0, px0, ph, pw, degree, 6, nums)
                px0 += degree
            py0 += degree
    return out_np


# ---------------------------------------------------------------------------
# Ostwald variants


cdef void _ostwald_fill(unsigned char[:, :, ::1] out,
                        Py_ssize_t py0, Py_ssize_t px0,
                        Py_ssize_t ph, Py_ssize_t pw,
                        int64_t* mean, bint swap) noexcept nogil:
    cdef int64_t mx, mn, span
    cdef int64_t nums[3]
    cdef int64_t widths[3]
    cdef unsigned char tbl[9]
    cdef int64_t tmp
    cdef Py_ssize_t y, x, c, cx
    cdef int region
    mx = mean[0]
    mn = mean[0]
    for c in range(1, 3):
        if mean[c] > mx:
            mx = mean[c]
        if mean[c] < mn:
            mn = mean[c]
    nums[0] = 255 - mx  # black
    nums[1] = mn        # white
    nums[2] = mx - mn   # hue
    _apportion_k(<int64_t>pw, nums, 255, 3, widths)
    span = mx - mn if mx > mn else 1
    for c in range(3):
        tbl[c] = 0
        tbl[3 + c] = 255
        if mx > mn:
            tbl[6 + c] = <unsigned char>_round_div((mean[c] - mn) * 255, span)
        else:
            tbl[6 + c] = 255  # sentinel, never rendered
    if swap:
        tmp = widths[0]
        widths[0] = widths[1]
        widths[1] = tmp
        for c in range(3):
            tmp = tbl[c]
            tbl[c] = tbl[3 + c]
            tbl[3 + c] = <unsigned char>tmp
    for y in range(py0, py0 + ph):
        for x in range(px0, px0 + pw):
            cx = x - px0
            if cx < widths[0]:
                region = 0
            elif cx < widths[0] + widths[1]:
                region = 1
            else:
                region = 2
            for c in range(3):
                out[y, x, c] = tbl[3 * region + c]


cdef void _ostwald_grid(const unsigned char[:, :, ::1] img,
                        unsigned char[:, :, ::1] out,
                        int degree, bint randomise, uint64_t seed) noexcept nogil:
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t py0, px0, y, x, c, ph, pw
    cdef int64_t area
    cdef int64_t s[3]
    cdef int64_t mean[3]
    cdef bint swap
    cdef uint64_t srow
    py0 = 0
    while py0 < h:
        ph = degree if py0 + degree <= h else h - py0
        srow = _mix64(_mix64(seed) ^ <uint64_t>(py0 // degree))
        px0 = 0
        while px0 < w:
            pw = degree if px0 + degree <= w else w - px0
            for c in range(3):
                s[c] = 0
            for y in range(py0, py0 + ph):
                for x in range(px0, px0 + pw):
                    for c in range(3):
                        s[c] += img[y, x, c]
            area = <int64_t>ph * pw
            for c in range(3):
                mean[c] = _round_div(s[c], area)
            swap = 0
            if randomise:
                swap = <bint>(_mix64(srow ^ <uint64_t>(px0 // degree)) & 1)
            _ostwald_fill(out, py0, px0, ph, pw, mean, swap)
            px0 += degree
        py0 += degree


def ostwald_checker(const unsigned char[:, :, ::1] img, int degree):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    with nogil:
        _ostwald_grid(img, out, degree, 0, 0)
    return out_np


def ostwald_random(const unsigned char[:, :, ::1] img, int degree, seed):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    with nogil:
        _ostwald_grid(img, out, degree, 1, s)
    return out_np


def ostwald_rgb(const unsigned char[:, :, ::1] img, int degree):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    out_np = np.empty((h, w, 3), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_np
    cdef Py_ssize_t gx0, y, x, c, gw, cx
    cdef int group = 3 * degree
    cdef int64_t mx, mn, span
    cdef int64_t s[3]
    cdef int64_t mean[3]
    cdef int64_t nums[3]
    cdef int64_t widths[3]
    cdef unsigned char hue[3]
    with nogil:
        gx0 = 0
        while gx0 < w:
            gw = group if gx0 + group <= w else w - gx0
            for y in range(h):
                for c in range(3):
                    s[c] = 0
                for x in range(gx0, gx0 + gw):
                    for c in range(3):
                        s[c] += img[y, x, c]
                mx = 0
                mn = 255
                for c in range(3):
                    mean[c] = _round_div(s[c], <int64_t>gw)
                    if mean[c] > mx:
                        mx = mean[c]
                    if mean[c] < mn:
                        mn = mean[c]
                nums[0] = 255 - mx
                nums[1] = mn
                nums[2] = mx - mn
                _apportion_k(<int64_t>gw, nums, 255, 3, widths)
                span = mx - mn if mx > mn else 1
                for c in range(3):
                    if mx > mn:
                        hue[c] = <unsigned char>_round_div((mean[c] - mn) * 255, span)
                    else:
                        hue[c] = 255  # sentinel, never rendered
                for x in range(gx0, gx0 + gw):
                    cx = x - gx0
                    if cx < widths[0]:
                        for c in range(3):
                            out[y, x, c] = 0
                    elif cx < widths[0] + widths[1]:
                        for c in range(3):
                            out[y, x, c] = 255
                    else:
                        for c in range(3):
                            out[y, x, c] = hue[c]
            gx0 += group
    return out_np
