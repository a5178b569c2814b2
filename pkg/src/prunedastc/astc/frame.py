"""Whole-image encode and decode on top of the compiled kernels."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, UnsupportedConfigurationError
from ..image import BlockSize, as_image, crop, padded_dims
from .blockpack import unpack_block
from .config import BLOCK_BYTES, EncoderConfig
from .kernels import decode_rows, encode_rows


@dataclass(frozen=True)
class EncodeStats:
    width: int
    height: int
    padded_width: int
    padded_height: int
    blocks: int
    payload_bytes: int
    bpp: float
    encode_seconds: float


@dataclass(frozen=True)
class EncodedImage:
    """Raster-order blocks plus the geometry needed to decode them."""

    payload: bytes
    block: BlockSize
    width: int
    height: int
    stats: EncodeStats

    @property
    def padded_dims(self) -> tuple[int, int]:
        return padded_dims(self.width, self.height, self.block)


def _row_chunks(rows: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, rows))
    bounds = np.linspace(0, rows, workers + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _run(fn, chunks, threads):
    if threads <= 1 or len(chunks) == 1:
        return [fn(a, b) for a, b in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: fn(*ab), chunks))


def encode_blocks(img: np.ndarray, size: BlockSize, threads: int = 1) -> np.ndarray:
    """Encode a frame into a ``(blocks, 16)`` uint8 array.

    Frames that are not block aligned are encoded as if edge-padded; the
    kernel clamps its reads instead of materialising the padded copy.
    """
    img = np.ascontiguousarray(img)
    h, w = img.shape[:2]
    pw, ph = padded_dims(w, h, size)
    nbx, nby = pw // size.width, ph // size.height
    out = np.empty((nbx * nby, BLOCK_BYTES), dtype=np.uint8)
    _run(lambda a, b: encode_rows(img, size, a, b, out), _row_chunks(nby, threads), threads)
    return out


def encode_image(img, cfg: EncoderConfig = EncoderConfig(), threads: int = 1) -> EncodedImage:
    """Pad, encode and time one image.

    The payload is ``16 * ceil(w / bw) * ceil(h / bh)`` bytes regardless of
    content, and does not depend on ``threads``.
    """
    img = as_image(img)
    h, w = img.shape[:2]
    size = cfg.block
    start = time.perf_counter()
    blocks = encode_blocks(img, size, threads)
    elapsed = time.perf_counter() - start
    payload = blocks.tobytes()
    pw, ph = padded_dims(w, h, size)
    stats = EncodeStats(
        width=w,
        height=h,
        padded_width=pw,
        padded_height=ph,
        blocks=blocks.shape[0],
        payload_bytes=len(payload),
        bpp=8 * len(payload) / (w * h),
        encode_seconds=elapsed,
    )
    return EncodedImage(payload, size, w, h, stats)


def decode_image(
    payload: bytes,
    size: BlockSize,
    width: int,
    height: int,
    threads: int = 1,
) -> np.ndarray:
    """Decode raster-order blocks and crop to ``width`` x ``height``."""
    pw, ph = padded_dims(width, height, size)
    nbx, nby = pw // size.width, ph // size.height
    expected = nbx * nby * BLOCK_BYTES
    if len(payload) != expected:
        raise DimensionError(
            f"payload holds {len(payload) // BLOCK_BYTES} blocks, {width}x{height} at {size} needs {nbx * nby}"
        )
    blocks = np.frombuffer(payload, dtype=np.uint8).reshape(-1, BLOCK_BYTES)
    out = np.empty((ph, pw, 3), dtype=np.uint8)
    bad = _run(lambda a, b: decode_rows(blocks, nbx, size, a, b, out), _row_chunks(nby, threads), threads)
    bad = [k for k in bad if k >= 0]
    if bad:
        k = min(bad)
        # let the reference unpacker produce the precise reason
        unpack_block(payload[k * BLOCK_BYTES : (k + 1) * BLOCK_BYTES])
        raise UnsupportedConfigurationError(f"block {k} is not in the pruned configuration")
    return np.ascontiguousarray(crop(out, width, height))


def roundtrip(img, cfg: EncoderConfig = EncoderConfig(), threads: int = 1) -> tuple[np.ndarray, EncodedImage]:
    enc = encode_image(img, cfg, threads)
    return decode_image(enc.payload, enc.block, enc.width, enc.height, threads), enc
