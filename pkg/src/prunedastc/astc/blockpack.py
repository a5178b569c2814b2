"""Packing and unpacking of 128-bit blocks in the pruned configuration.

Bit layout (bit 0 is the least significant bit of byte 0)::

    0..10    block mode 0x066: 8x5 weight grid, 4 weight levels, one plane
    11..12   partition count - 1 (= 0)
    13..16   color endpoint mode 8 (LDR RGB direct)
    17..46   six 5-bit endpoint values, v0 first
    47       unused
    48..127  weight stream, 2 bits per weight, written downwards from bit
             127 (stream bit i lives at block bit 127 - i)

With 31 bits left for color data the endpoint range resolves to 32 levels,
so neither stream needs trit or quint packing.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedConfigurationError
from .config import (
    BLOCK_BYTES,
    BLOCK_MODE,
    BLOCK_MODE_MASK,
    CEM_LDR_RGB_DIRECT,
    CEM_SHIFT,
    ENDPOINT_BITS,
    ENDPOINT_SHIFT,
    GRID_COUNT,
    GRID_H,
    GRID_W,
    PARTITION_SHIFT,
    WEIGHT_BITS,
)
from .types import QuantizedEndpoints

HEADER = BLOCK_MODE | (CEM_LDR_RGB_DIRECT << CEM_SHIFT)
_ENDPOINT_MASK = (1 << ENDPOINT_BITS) - 1
_WEIGHT_MASK = (1 << WEIGHT_BITS) - 1


def reverse_bits(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def pack_block(qep, weights) -> bytes:
    """Pack six 5-bit endpoint values and a ``(5, 8)`` grid of 2-bit
    weights into 16 little-endian bytes."""
    values = [int(v) for v in qep]
    if len(values) != 6 or any(not 0 <= v <= _ENDPOINT_MASK for v in values):
        raise ValueError(f"endpoint values must be six integers in [0, 31], got {values}")
    flat = np.asarray(weights).reshape(-1)
    if flat.size != GRID_COUNT or flat.min() < 0 or flat.max() > _WEIGHT_MASK:
        raise ValueError("weights must be a 5x8 grid of integers in [0, 3]")

    bits = HEADER
    for k, v in enumerate(values):
        bits |= v << (ENDPOINT_SHIFT + ENDPOINT_BITS * k)
    stream = 0
    for k, w in enumerate(flat.tolist()):
        stream |= int(w) << (WEIGHT_BITS * k)
    bits |= reverse_bits(stream, 128)
    return bits.to_bytes(BLOCK_BYTES, "little")


def unpack_block(block: bytes) -> tuple[QuantizedEndpoints, np.ndarray]:
    """Inverse of :func:`pack_block`.

    Raises :class:`UnsupportedConfigurationError` for anything that was not
    produced by the pruned encoder, including void-extent blocks.
    """
    if len(block) != BLOCK_BYTES:
        raise ValueError(f"an ASTC block is {BLOCK_BYTES} bytes, got {len(block)}")
    bits = int.from_bytes(block, "little")
    mode = bits & BLOCK_MODE_MASK
    if mode & 0x1FF == 0x1FC:
        raise UnsupportedConfigurationError("void-extent block")
    if mode != BLOCK_MODE:
        raise UnsupportedConfigurationError(f"block mode {mode:#05x} is not the pruned 8x5 mode")
    partitions = ((bits >> PARTITION_SHIFT) & 0x3) + 1
    if partitions != 1:
        raise UnsupportedConfigurationError(f"{partitions} partitions; only 1 is supported")
    cem = (bits >> CEM_SHIFT) & 0xF
    if cem != CEM_LDR_RGB_DIRECT:
        raise UnsupportedConfigurationError(f"color endpoint mode {cem}; only mode 8 is supported")

    qep = QuantizedEndpoints(
        *((bits >> (ENDPOINT_SHIFT + ENDPOINT_BITS * k)) & _ENDPOINT_MASK for k in range(6))
    )
    stream = reverse_bits(bits, 128)
    weights = np.array(
        [(stream >> (WEIGHT_BITS * k)) & _WEIGHT_MASK for k in range(GRID_COUNT)],
        dtype=np.uint8,
    ).reshape(GRID_H, GRID_W)
    return qep, weights
