"""The ``.astc`` container and raster image files (PNG, binary PPM)."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .astc.config import BLOCK_BYTES
from .errors import (
    BadMagicError,
    ContainerError,
    TruncatedPayloadError,
    UnsupportedFootprintError,
    UnsupportedImageError,
)
from .image import BlockSize, as_image, padded_dims

ASTC_MAGIC = bytes((0x13, 0xAB, 0xA1, 0x5C))
ASTC_HEADER_BYTES = 16

IMAGE_SUFFIXES = (".png", ".ppm")


@dataclass(frozen=True)
class AstcFile:
    block: BlockSize
    width: int
    height: int
    payload: bytes

    @property
    def block_count(self) -> int:
        pw, ph = padded_dims(self.width, self.height, self.block)
        return (pw // self.block.width) * (ph // self.block.height)


def astc_header(block: BlockSize, width: int, height: int) -> bytes:
    if not (0 < width < 1 << 24 and 0 < height < 1 << 24):
        raise ContainerError(f"dimensions {width}x{height} do not fit the header")
    return (
        ASTC_MAGIC
        + bytes((block.width, block.height, 1))
        + width.to_bytes(3, "little")
        + height.to_bytes(3, "little")
        + (1).to_bytes(3, "little")
    )


def write_astc(path, payload: bytes, block: BlockSize, width: int, height: int) -> None:
    """Write an ``.astc`` file. The header stores the unpadded dimensions."""
    expected = AstcFile(block, width, height, b"").block_count * BLOCK_BYTES
    if len(payload) != expected:
        raise ContainerError(f"payload is {len(payload)} bytes, {width}x{height} at {block} needs {expected}")
    with open(path, "wb") as f:
        f.write(astc_header(block, width, height))
        f.write(payload)


def parse_astc(data: bytes) -> AstcFile:
    if len(data) < ASTC_HEADER_BYTES:
        raise TruncatedPayloadError("file shorter than the 16-byte header")
    if data[:4] != ASTC_MAGIC:
        raise BadMagicError(f"bad magic {data[:4].hex()}")
    bx, by, bz = data[4], data[5], data[6]
    width = int.from_bytes(data[7:10], "little")
    height = int.from_bytes(data[10:13], "little")
    depth = int.from_bytes(data[13:16], "little")
    if bz != 1 or depth != 1:
        raise UnsupportedFootprintError(f"3D footprint {bx}x{by}x{bz} (depth {depth})")
    try:
        block = BlockSize.from_dims(bx, by)
    except ValueError:
        raise UnsupportedFootprintError(f"block footprint {bx}x{by}x{bz} is not supported") from None
    if width == 0 or height == 0:
        raise ContainerError("zero image dimension")
    info = AstcFile(block, width, height, b"")
    expected = info.block_count * BLOCK_BYTES
    payload = data[ASTC_HEADER_BYTES:]
    if len(payload) < expected:
        raise TruncatedPayloadError(f"payload has {len(payload)} bytes, expected {expected}")
    return AstcFile(block, width, height, bytes(payload[:expected]))


def read_astc(path) -> AstcFile:
    return parse_astc(Path(path).read_bytes())


_PPM_TOKEN = re.compile(rb"(?:\s+|#[^\n]*\n?)*(\S+)")


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    pos = 0
    fields = []
    for _ in range(4):
        m = _PPM_TOKEN.match(data, pos)
        if not m:
            raise UnsupportedImageError(f"{path}: truncated PPM header")
        fields.append(m.group(1))
        pos = m.end()
    if fields[0] != b"P6":
        raise UnsupportedImageError(f"{path}: only binary PPM (P6) is supported")
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise UnsupportedImageError(f"{path}: malformed PPM header") from None
    if maxval != 255:
        raise UnsupportedImageError(f"{path}: PPM maxval {maxval}; only 8-bit (255) is supported")
    pos += 1  # single whitespace byte before the raster
    size = width * height * 3
    raster = data[pos : pos + size]
    if len(raster) != size or width < 1 or height < 1:
        raise UnsupportedImageError(f"{path}: truncated PPM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(path, img) -> None:
    img = as_image(img)
    h, w = img.shape[:2]
    with open(path, "wb") as f:
        f.write(b"P6\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(img).tobytes())


def read_image(path) -> np.ndarray:
    """Load a PNG or P6 PPM as an ``(h, w, 3)`` uint8 array.

    Alpha is dropped; 16-bit sources are rejected.
    """
    path = Path(path)
    if path.suffix.lower() == ".ppm":
        return read_ppm(path)
    depth = _png_bit_depth(path)
    if depth is not None and depth > 8:
        raise UnsupportedImageError(f"{path}: {depth}-bit PNG; only 8-bit sources are supported")
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("I;16", "I;16B", "I;16L", "I", "F"):
                raise UnsupportedImageError(f"{path}: {mode} images (more than 8 bits) are not supported")
            if mode != "RGB":
                im = im.convert("RGBA" if "A" in mode or "transparency" in im.info else "RGB")
            arr = np.asarray(im)
    except OSError as exc:
        if isinstance(exc, FileNotFoundError):
            raise
        raise UnsupportedImageError(f"{path}: {exc}") from exc
    return np.ascontiguousarray(arr[..., :3])


def _png_bit_depth(path: Path) -> int | None:
    # Pillow silently narrows 16-bit RGB PNGs, so read IHDR directly
    with open(path, "rb") as f:
        head = f.read(26)
    if len(head) == 26 and head[:8] == b"\x89PNG\r\n\x1a\n" and head[12:16] == b"IHDR":
        return head[24]
    return None


def write_image(path, img) -> None:
    """Write PNG or PPM depending on the file suffix."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".ppm":
        write_ppm(path, img)
    elif suffix == ".png":
        Image.fromarray(as_image(img), "RGB").save(path)
    else:
        raise UnsupportedImageError(f"{path}: output must be .png or .ppm")


def is_image_path(path) -> bool:
    return os.fspath(path).lower().endswith(IMAGE_SUFFIXES)
