"""Small value types passed between codec stages."""

from __future__ import annotations

from typing import NamedTuple


class EndpointPair(NamedTuple):
    e0: tuple[int, int, int]
    e1: tuple[int, int, int]


class QuantizedEndpoints(NamedTuple):
    """Six 5-bit values in CEM 8 order ``(r0, r1, g0, g1, b0, b1)``."""

    v0: int
    v1: int
    v2: int
    v3: int
    v4: int
    v5: int

    @property
    def low(self) -> tuple[int, int, int]:
        return self.v0, self.v2, self.v4

    @property
    def high(self) -> tuple[int, int, int]:
        return self.v1, self.v3, self.v5
