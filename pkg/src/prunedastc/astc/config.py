"""The single pruned ASTC configuration and its fixed bit layout."""

from __future__ import annotations

from dataclasses import dataclass

from ..image import BlockSize

GRID_W = 8
GRID_H = 5
GRID_COUNT = GRID_W * GRID_H
ENDPOINT_BITS = 5
WEIGHT_BITS = 2
WEIGHT_LEVELS = 1 << WEIGHT_BITS
ENDPOINT_LEVELS = 1 << ENDPOINT_BITS
CEM_LDR_RGB_DIRECT = 8

# 2D block mode: R=0b100 (4-level weights, H=0), layout "B+8 x A+2" with
# A=3, B=0 -> 8x5 grid, single plane.
BLOCK_MODE = 0x066
BLOCK_MODE_MASK = 0x7FF
PARTITION_SHIFT = 11
CEM_SHIFT = 13
ENDPOINT_SHIFT = 17
WEIGHT_STREAM_BITS = GRID_COUNT * WEIGHT_BITS
# first block bit (from the bottom) occupied by the reversed weight stream
WEIGHT_FLOOR = 128 - WEIGHT_STREAM_BITS
BLOCK_BYTES = 16


@dataclass(frozen=True)
class EncoderConfig:
    """Encoder settings; only the block footprint is free."""

    block: BlockSize = BlockSize.B12x12
    endpoint_bits: int = ENDPOINT_BITS
    weight_bits: int = WEIGHT_BITS
    weight_grid: tuple[int, int] = (GRID_W, GRID_H)
    partitions: int = 1
    color_endpoint_mode: int = CEM_LDR_RGB_DIRECT
    dual_plane: bool = False

    def __post_init__(self):
        fixed = (
            (self.endpoint_bits, ENDPOINT_BITS),
            (self.weight_bits, WEIGHT_BITS),
            (tuple(self.weight_grid), (GRID_W, GRID_H)),
            (self.partitions, 1),
            (self.color_endpoint_mode, CEM_LDR_RGB_DIRECT),
            (self.dual_plane, False),
        )
        for got, want in fixed:
            if got != want:
                raise ValueError(f"only the pruned configuration is supported ({got!r} != {want!r})")
        if not isinstance(self.block, BlockSize):
            raise TypeError("block must be a BlockSize")

    @property
    def used_bits(self) -> int:
        endpoint = 6 * self.endpoint_bits
        weights = GRID_COUNT * self.weight_bits
        return 11 + 2 + 4 + endpoint + weights
