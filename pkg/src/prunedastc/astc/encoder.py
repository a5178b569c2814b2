"""Block encoder: reference implementation of each pipeline stage.

The pipeline for one block is

    select_endpoints -> project_weights -> downsample_weights
        -> quantize_weights -> quantize_endpoints -> pack_block

Every stage works on a single block with exact integer arithmetic where
the inputs are integers and IEEE double arithmetic elsewhere. The frame
kernels in :mod:`prunedastc.astc.kernels` repeat the same operations in the
same order and must produce identical bytes.
"""

from __future__ import annotations

import numpy as np

from ..image import BlockSize
from .blockpack import pack_block
from .config import GRID_H, GRID_W, EncoderConfig
from .decoder import unquantize_endpoint
from .types import EndpointPair, QuantizedEndpoints


def select_endpoints(block: np.ndarray) -> EndpointPair:
    """Bounding-box endpoints shrunk by 1/16 of the channel range."""
    texels = np.asarray(block, dtype=np.int64).reshape(-1, 3)
    lo = texels.min(axis=0)
    hi = texels.max(axis=0)
    inset = (hi - lo) // 16
    e0 = tuple(int(v) for v in lo + inset)
    e1 = tuple(int(v) for v in hi - inset)
    if sum(e0) > sum(e1):
        e0, e1 = e1, e0
    return EndpointPair(e0, e1)


def project_weights(block: np.ndarray, ep: EndpointPair) -> np.ndarray:
    """Clamped parameter of each texel's orthogonal projection onto the
    endpoint line, shape ``(bh, bw)``. A degenerate line gives all zeros."""
    block = np.asarray(block, dtype=np.int64)
    e0 = np.array(ep.e0, dtype=np.int64)
    d = np.array(ep.e1, dtype=np.int64) - e0
    dd = int(d @ d)
    if dd == 0:
        return np.zeros(block.shape[:2])
    num = (block - e0) @ d
    return np.clip(num / dd, 0.0, 1.0)


def sample_positions(extent: int, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Corner-anchored sample positions ``k * (extent - 1) / (count - 1)``.

    Returns ``(lower index, upper index, fraction)`` per sample.
    """
    pos = np.arange(count) * (extent - 1) / (count - 1)
    lower = np.floor(pos).astype(np.int64)
    frac = pos - lower
    upper = np.minimum(lower + 1, extent - 1)
    return lower, upper, frac


def downsample_weights(ideal: np.ndarray) -> np.ndarray:
    """Bilinearly resample a ``(bh, bw)`` weight field to the 8x5 grid.

    Output has shape ``(5, 8)`` (rows, columns).
    """
    ideal = np.asarray(ideal, dtype=np.float64)
    bh, bw = ideal.shape
    x0, x1, fx = sample_positions(bw, GRID_W)
    y0, y1, fy = sample_positions(bh, GRID_H)
    out = np.empty((GRID_H, GRID_W))
    for j in range(GRID_H):
        for i in range(GRID_W):
            top = (1.0 - fx[i]) * ideal[y0[j], x0[i]] + fx[i] * ideal[y0[j], x1[i]]
            bot = (1.0 - fx[i]) * ideal[y1[j], x0[i]] + fx[i] * ideal[y1[j], x1[i]]
            out[j, i] = (1.0 - fy[j]) * top + fy[j] * bot
    return out


def quantize_weights(grid: np.ndarray) -> np.ndarray:
    """Map weights in [0, 1] to 2-bit codes by rounding ``3 * w``."""
    q = np.floor(np.asarray(grid, dtype=np.float64) * 3.0 + 0.5)
    return np.clip(q, 0, 3).astype(np.uint8)


def quantize_endpoint_value(x: int) -> int:
    """``round(x * 31 / 255)``; the exact quotient is never a tie."""
    return (62 * int(x) + 255) // 510


def quantize_endpoints(ep: EndpointPair) -> tuple[QuantizedEndpoints, bool]:
    """Quantize both endpoints to 5 bits.

    Returns the CEM 8 value tuple and whether the endpoints had to be
    swapped to keep the decoder off the blue-contraction path. When the
    flag is set, weights for the block must be inverted (``q -> 3 - q``).
    """
    lo = [quantize_endpoint_value(c) for c in ep.e0]
    hi = [quantize_endpoint_value(c) for c in ep.e1]
    # the decoder compares sums of unquantized values
    s_lo = sum(unquantize_endpoint(v) for v in lo)
    s_hi = sum(unquantize_endpoint(v) for v in hi)
    swapped = s_lo > s_hi
    if swapped:
        lo, hi = hi, lo
    return QuantizedEndpoints(lo[0], hi[0], lo[1], hi[1], lo[2], hi[2]), swapped


def encode_block(block: np.ndarray, cfg: EncoderConfig = EncoderConfig()) -> bytes:
    """Encode one ``(bh, bw, 3)`` block into 16 bytes."""
    block = np.asarray(block)
    size: BlockSize = cfg.block
    if block.shape != (size.height, size.width, 3):
        raise ValueError(f"block of shape {block.shape} does not match {size}")
    ep = select_endpoints(block)
    ideal = project_weights(block, ep)
    weights = quantize_weights(downsample_weights(ideal))
    qep, swapped = quantize_endpoints(ep)
    if swapped:
        weights = 3 - weights
    return pack_block(qep, weights)
