"""Encode-throughput benchmark and a line-latency budget calculator."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .astc.frame import encode_blocks
from .image import BlockSize, as_image, padded_dims
from .metrics import bpp as bits_per_pixel

# Reference context only, never asserted: single A76 core, 2048x1024 frame.
REFERENCE_MS_PER_FRAME = {BlockSize.B12x12: 5.8, BlockSize.B8x8: 7.0}
REFERENCE_LATENCY_LINES = {500.0: 145.0, 2.0: 3.2}


@dataclass
class BenchReport:
    ms_per_frame: float
    ms_std: float
    frames: int
    iterations: int
    threads: int
    block: BlockSize
    bpp: float
    samples_ms: list[float] = field(default_factory=list, repr=False)
    io_ms_per_frame: float | None = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["block"] = str(self.block)
        d["reference_ms_per_frame"] = REFERENCE_MS_PER_FRAME[self.block]
        return d


def run_bench(
    frames: list[np.ndarray],
    block: BlockSize = BlockSize.B12x12,
    iterations: int = 10,
    threads: int = 1,
    warmup: int = 1,
) -> BenchReport:
    """Time encode only over preloaded frames.

    Each iteration encodes every frame once; ``warmup`` leading iterations
    are run and discarded (the first also triggers kernel compilation).
    """
    if not frames:
        raise ValueError("no frames to benchmark")
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    frames = [np.ascontiguousarray(as_image(f)) for f in frames]
    for _ in range(warmup):
        for f in frames:
            encode_blocks(f, block, threads)
    samples = []
    payload = 0
    pixels = 0
    for _ in range(iterations):
        for f in frames:
            start = time.perf_counter()
            out = encode_blocks(f, block, threads)
            samples.append((time.perf_counter() - start) * 1000.0)
            payload += out.size
            pixels += f.shape[0] * f.shape[1]
    return BenchReport(
        ms_per_frame=statistics.fmean(samples),
        ms_std=statistics.pstdev(samples),
        frames=len(frames),
        iterations=iterations,
        threads=threads,
        block=block,
        bpp=8 * payload / pixels,
        samples_ms=samples,
    )


@dataclass(frozen=True)
class LatencyModel:
    """Inputs of the chunked encode-and-send latency model.

    ``link_mbits_per_s`` may be ``math.inf`` and ``encode_ms_per_frame``
    may be 0 to isolate one term.
    """

    encode_ms_per_frame: float
    link_mbits_per_s: float
    bpp: float
    width: int
    height: int
    budget_ms: float = 1.0

    def __post_init__(self):
        for name in ("link_mbits_per_s", "bpp", "width", "height", "budget_ms"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.encode_ms_per_frame < 0:
            raise ValueError("encode_ms_per_frame must be non-negative")


@dataclass(frozen=True)
class LatencyBreakdown:
    lines: float
    encode_ms_per_line: float
    transmit_ms_per_line: float
    encode_ms: float
    transmit_ms: float
    reachable: bool


def latency_lines(model: LatencyModel) -> LatencyBreakdown:
    """Largest chunk of ``L`` image lines whose encode time plus transmit
    time fits in the budget.

    encode(L) = L / height * encode_ms_per_frame and
    transmit(L) = L * width * bpp / link_rate; successive chunks are assumed
    to overlap, so only one chunk's encode and send count against the
    budget. ``reachable`` is False when not even one full line fits.
    """
    enc_line = model.encode_ms_per_frame / model.height
    bits_per_ms = model.link_mbits_per_s * 1e3
    tx_line = 0.0 if math.isinf(bits_per_ms) else model.width * model.bpp / bits_per_ms
    per_line = enc_line + tx_line
    if per_line == 0:
        raise ValueError("zero-cost encoder on an infinite link has no finite latency")
    lines = model.budget_ms / per_line
    return LatencyBreakdown(
        lines=lines,
        encode_ms_per_line=enc_line,
        transmit_ms_per_line=tx_line,
        encode_ms=lines * enc_line,
        transmit_ms=lines * tx_line,
        reachable=lines >= 1.0,
    )


def nominal_bpp(block: BlockSize) -> float:
    """128 bits per footprint: 0.888... at 12x12 and 2.0 at 8x8."""
    return 128 / block.texels


def payload_bpp(block: BlockSize, width: int, height: int) -> float:
    """Bits per pixel of the padded payload for a given frame size."""
    pw, ph = padded_dims(width, height, block)
    return bits_per_pixel(16 * (pw // block.width) * (ph // block.height), width, height)
