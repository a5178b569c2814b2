"""Block decoder for the pruned configuration.

Follows the LDR decode procedure of the ASTC format with 8-bit output
(the ``decode_unorm8`` behaviour): endpoint bit replication, weight
unquantization to 0..64, fixed-point weight infill, and 16-bit color
interpolation truncated to its top byte.
"""

from __future__ import annotations

import numpy as np

from ..image import BlockSize
from .blockpack import unpack_block
from .config import GRID_H, GRID_W


def unquantize_endpoint(q: int) -> int:
    """Expand a 5-bit endpoint value to 8 bits by bit replication."""
    return (q << 3) | (q >> 2)


def unquantize_weight(q: int) -> int:
    """Expand a 2-bit weight to the 0..64 range."""
    w = (q << 4) | (q << 2) | q
    return w + 1 if w > 32 else w


def decode_endpoints(qep) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """CEM 8 endpoint decode, including the blue-contraction branch that
    the encoder never selects."""
    v = [unquantize_endpoint(int(x)) for x in qep]
    s0 = v[0] + v[2] + v[4]
    s1 = v[1] + v[3] + v[5]
    if s1 >= s0:
        return (v[0], v[2], v[4]), (v[1], v[3], v[5])
    return (
        ((v[1] + v[5]) >> 1, (v[3] + v[5]) >> 1, v[5]),
        ((v[0] + v[4]) >> 1, (v[2] + v[4]) >> 1, v[4]),
    )


def infill_weights(grid: np.ndarray, size: BlockSize) -> np.ndarray:
    """Upsample unquantized ``(5, 8)`` grid weights to ``(bh, bw)`` texel
    weights with the format's fixed-point bilinear infill."""
    grid = np.asarray(grid, dtype=np.int64).reshape(-1)
    bw, bh = size.width, size.height
    ds = (1024 + bw // 2) // (bw - 1)
    dt = (1024 + bh // 2) // (bh - 1)
    out = np.empty((bh, bw), dtype=np.int64)
    for t in range(bh):
        gt = (dt * t * (GRID_H - 1) + 32) >> 6
        jt, ft = gt >> 4, gt & 0xF
        for s in range(bw):
            gs = (ds * s * (GRID_W - 1) + 32) >> 6
            js, fs = gs >> 4, gs & 0xF
            v0 = js + jt * GRID_W
            w11 = (fs * ft + 8) >> 4
            w10 = ft - w11
            w01 = fs - w11
            w00 = 16 - fs - ft + w11
            # neighbours past the grid edge always carry zero weight
            p00 = grid[v0]
            p01 = grid[v0 + 1] if w01 or w11 else 0
            p10 = grid[v0 + GRID_W] if w10 or w11 else 0
            p11 = grid[v0 + GRID_W + 1] if w11 else 0
            out[t, s] = (p00 * w00 + p01 * w01 + p10 * w10 + p11 * w11 + 8) >> 4
    return out


def interpolate_color(e0, e1, w: int) -> tuple[int, int, int]:
    """Blend two 8-bit endpoints with a 0..64 weight; returns 8-bit RGB."""
    out = []
    for a, b in zip(e0, e1):
        c0 = (a << 8) | a
        c1 = (b << 8) | b
        c = (c0 * (64 - w) + c1 * w + 32) >> 6
        out.append(c >> 8)
    return tuple(out)


def decode_block(block: bytes, size: BlockSize) -> np.ndarray:
    """Decode 16 bytes to a ``(bh, bw, 3)`` uint8 block."""
    qep, q = unpack_block(block)
    e0, e1 = decode_endpoints(qep)
    grid = np.vectorize(unquantize_weight)(q)
    texel_w = infill_weights(grid, size)
    out = np.empty((size.height, size.width, 3), dtype=np.uint8)
    for t in range(size.height):
        for s in range(size.width):
            out[t, s] = interpolate_color(e0, e1, int(texel_w[t, s]))
    return out
