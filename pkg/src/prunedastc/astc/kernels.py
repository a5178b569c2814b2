"""Compiled whole-frame encode and decode loops.

These repeat the reference stages of :mod:`.encoder` and :mod:`.decoder`
operation for operation (same float expressions in the same order, no
fast-math), so their output is byte-identical to the reference path. The
kernels release the GIL; callers split the block grid into row ranges and
run them on a thread pool.
"""

from __future__ import annotations

from functools import lru_cache

import numba
import numpy as np

from ..image import BlockSize
from .blockpack import HEADER
from .config import ENDPOINT_BITS, ENDPOINT_SHIFT, GRID_COUNT, GRID_H, GRID_W
from .encoder import sample_positions

_REV8 = np.array([int(f"{i:08b}"[::-1], 2) for i in range(256)], dtype=np.uint8)


@lru_cache(maxsize=None)
def encode_tables(size: BlockSize):
    x0, x1, fx = sample_positions(size.width, GRID_W)
    y0, y1, fy = sample_positions(size.height, GRID_H)
    rows = np.zeros(size.height, dtype=np.bool_)
    rows[y0] = True
    rows[y1] = True
    return x0, x1, fx, y0, y1, fy, rows


@lru_cache(maxsize=None)
def infill_tables(size: BlockSize):
    """Per-texel grid index of the top-left neighbour and the four
    fixed-point infill weights, shape ``(bh * bw, 5)``."""
    bw, bh = size.width, size.height
    ds = (1024 + bw // 2) // (bw - 1)
    dt = (1024 + bh // 2) // (bh - 1)
    table = np.zeros((bh * bw, 5), dtype=np.int32)
    for t in range(bh):
        gt = (dt * t * (GRID_H - 1) + 32) >> 6
        jt, ft = gt >> 4, gt & 0xF
        for s in range(bw):
            gs = (ds * s * (GRID_W - 1) + 32) >> 6
            js, fs = gs >> 4, gs & 0xF
            w11 = (fs * ft + 8) >> 4
            table[t * bw + s] = (js + jt * GRID_W, 16 - fs - ft + w11, fs - w11, ft - w11, w11)
    return table


@numba.njit(nogil=True, cache=True)
def _unq_endpoint(q):
    return (q << 3) | (q >> 2)


@numba.njit(nogil=True, cache=True)
def _encode_rows(img, bw, bh, row_start, row_stop, x0, x1, fx, y0, y1, fy, rows, rev8, out):
    # reads past the image edge clamp to the last row/column, which is the
    # same as encoding the edge-replicated padded frame
    height, width = img.shape[0], img.shape[1]
    nbx = (width + bw - 1) // bw
    ideal = np.zeros((bh, bw))
    weights = np.zeros(GRID_COUNT, dtype=np.int64)
    px = np.zeros((bh, bw, 3), dtype=np.int64)
    for by in range(row_start, row_stop):
        for bx in range(nbx):
            oy = by * bh
            ox = bx * bw
            lo_r = lo_g = lo_b = 255
            hi_r = hi_g = hi_b = 0
            for t in range(bh):
                y = min(oy + t, height - 1)
                for s in range(bw):
                    x = min(ox + s, width - 1)
                    r = np.int64(img[y, x, 0])
                    g = np.int64(img[y, x, 1])
                    b = np.int64(img[y, x, 2])
                    px[t, s, 0] = r
                    px[t, s, 1] = g
                    px[t, s, 2] = b
                    lo_r = min(lo_r, r)
                    lo_g = min(lo_g, g)
                    lo_b = min(lo_b, b)
                    hi_r = max(hi_r, r)
                    hi_g = max(hi_g, g)
                    hi_b = max(hi_b, b)
            ins = (hi_r - lo_r) // 16
            e0r, e1r = lo_r + ins, hi_r - ins
            ins = (hi_g - lo_g) // 16
            e0g, e1g = lo_g + ins, hi_g - ins
            ins = (hi_b - lo_b) // 16
            e0b, e1b = lo_b + ins, hi_b - ins
            if e0r + e0g + e0b > e1r + e1g + e1b:
                e0r, e1r = e1r, e0r
                e0g, e1g = e1g, e0g
                e0b, e1b = e1b, e0b
            dr = e1r - e0r
            dg = e1g - e0g
            db = e1b - e0b
            dd = dr * dr + dg * dg + db * db
            for t in range(bh):
                if not rows[t]:
                    continue
                for s in range(bw):
                    if dd == 0:
                        ideal[t, s] = 0.0
                        continue
                    num = (px[t, s, 0] - e0r) * dr + (px[t, s, 1] - e0g) * dg + (px[t, s, 2] - e0b) * db
                    w = num / dd
                    if w < 0.0:
                        w = 0.0
                    elif w > 1.0:
                        w = 1.0
                    ideal[t, s] = w

            q0r = (62 * e0r + 255) // 510
            q0g = (62 * e0g + 255) // 510
            q0b = (62 * e0b + 255) // 510
            q1r = (62 * e1r + 255) // 510
            q1g = (62 * e1g + 255) // 510
            q1b = (62 * e1b + 255) // 510
            u0 = _unq_endpoint(q0r) + _unq_endpoint(q0g) + _unq_endpoint(q0b)
            u1 = _unq_endpoint(q1r) + _unq_endpoint(q1g) + _unq_endpoint(q1b)
            swapped = u0 > u1
            if swapped:
                q0r, q1r = q1r, q0r
                q0g, q1g = q1g, q0g
                q0b, q1b = q1b, q0b

            for j in range(GRID_H):
                ya = y0[j]
                yb = y1[j]
                wy = fy[j]
                for i in range(GRID_W):
                    xa = x0[i]
                    xb = x1[i]
                    wx = fx[i]
                    top = (1.0 - wx) * ideal[ya, xa] + wx * ideal[ya, xb]
                    bot = (1.0 - wx) * ideal[yb, xa] + wx * ideal[yb, xb]
                    v = (1.0 - wy) * top + wy * bot
                    q = np.int64(np.floor(v * 3.0 + 0.5))
                    if q < 0:
                        q = 0
                    elif q > 3:
                        q = 3
                    if swapped:
                        q = 3 - q
                    weights[j * GRID_W + i] = q

            bits = (
                np.int64(HEADER)
                | (q0r << ENDPOINT_SHIFT)
                | (q1r << (ENDPOINT_SHIFT + ENDPOINT_BITS))
                | (q0g << (ENDPOINT_SHIFT + 2 * ENDPOINT_BITS))
                | (q1g << (ENDPOINT_SHIFT + 3 * ENDPOINT_BITS))
                | (q0b << (ENDPOINT_SHIFT + 4 * ENDPOINT_BITS))
                | (q1b << (ENDPOINT_SHIFT + 5 * ENDPOINT_BITS))
            )
            k = by * nbx + bx
            for b in range(6):
                out[k, b] = (bits >> (8 * b)) & 0xFF
            for j in range(10):
                packed = (
                    weights[4 * j]
                    | (weights[4 * j + 1] << 2)
                    | (weights[4 * j + 2] << 4)
                    | (weights[4 * j + 3] << 6)
                )
                out[k, 15 - j] = rev8[packed]


@numba.njit(nogil=True, cache=True)
def _decode_rows(blocks, nbx, bw, bh, row_start, row_stop, table, rev8, out):
    """Decode block rows into ``out`` (padded frame). Returns the index of
    the first unsupported block, or -1."""
    grid = np.zeros(GRID_COUNT + GRID_W + 1, dtype=np.int64)
    v = np.zeros(6, dtype=np.int64)
    e0 = np.zeros(3, dtype=np.int64)
    e1 = np.zeros(3, dtype=np.int64)
    for by in range(row_start, row_stop):
        for bx in range(nbx):
            k = by * nbx + bx
            low = np.int64(0)
            for b in range(6):
                low |= np.int64(blocks[k, b]) << (8 * b)
            if (low & 0x1FFFF) != HEADER:
                return k
            for n in range(6):
                v[n] = _unq_endpoint((low >> (ENDPOINT_SHIFT + ENDPOINT_BITS * n)) & 31)
            s0 = v[0] + v[2] + v[4]
            s1 = v[1] + v[3] + v[5]
            if s1 >= s0:
                for c in range(3):
                    e0[c] = v[2 * c]
                    e1[c] = v[2 * c + 1]
            else:
                e0[0] = (v[1] + v[5]) >> 1
                e0[1] = (v[3] + v[5]) >> 1
                e0[2] = v[5]
                e1[0] = (v[0] + v[4]) >> 1
                e1[1] = (v[2] + v[4]) >> 1
                e1[2] = v[4]
            for j in range(10):
                packed = rev8[blocks[k, 15 - j]]
                for n in range(4):
                    q = (packed >> (2 * n)) & 3
                    w = (q << 4) | (q << 2) | q
                    if w > 32:
                        w += 1
                    grid[4 * j + n] = w
            oy = by * bh
            ox = bx * bw
            for t in range(bh):
                for s in range(bw):
                    row = table[t * bw + s]
                    i0 = row[0]
                    tw = (
                        grid[i0] * row[1]
                        + grid[i0 + 1] * row[2]
                        + grid[i0 + GRID_W] * row[3]
                        + grid[i0 + GRID_W + 1] * row[4]
                        + 8
                    ) >> 4
                    for c in range(3):
                        c0 = e0[c] * 257
                        c1 = e1[c] * 257
                        out[oy + t, ox + s, c] = ((c0 * (64 - tw) + c1 * tw + 32) >> 6) >> 8
    return -1


def encode_rows(img: np.ndarray, size: BlockSize, row_start: int, row_stop: int, out: np.ndarray) -> None:
    """Encode block rows ``[row_start, row_stop)`` of a padded frame into
    ``out`` of shape ``(blocks, 16)``."""
    x0, x1, fx, y0, y1, fy, rows = encode_tables(size)
    _encode_rows(img, size.width, size.height, row_start, row_stop, x0, x1, fx, y0, y1, fy, rows, _REV8, out)


def decode_rows(blocks: np.ndarray, nbx: int, size: BlockSize, row_start: int, row_stop: int, out: np.ndarray) -> int:
    return _decode_rows(blocks, nbx, size.width, size.height, row_start, row_stop, infill_tables(size), _REV8, out)
