"""RGB8 image buffers, block padding and block extraction.

Images are plain ``numpy`` arrays of shape ``(height, width, 3)`` and dtype
``uint8``, row-major with interleaved channels. Alpha is never stored.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import BlockIndexError, DimensionError


class BlockSize(enum.Enum):
    """Supported block footprints, ``(width, height)`` in texels."""

    B12x12 = (12, 12)
    B8x8 = (8, 8)

    @property
    def width(self) -> int:
        return self.value[0]

    @property
    def height(self) -> int:
        return self.value[1]

    @property
    def texels(self) -> int:
        return self.value[0] * self.value[1]

    def __str__(self) -> str:
        return f"{self.width}x{self.height}"

    @classmethod
    def parse(cls, text: str) -> "BlockSize":
        """Parse ``"12x12"`` or ``"8x8"``."""
        for member in cls:
            if str(member) == text.strip().lower():
                return member
        raise ValueError(f"unsupported block size {text!r}; expected 12x12 or 8x8")

    @classmethod
    def from_dims(cls, width: int, height: int) -> "BlockSize":
        for member in cls:
            if member.value == (width, height):
                return member
        raise ValueError(f"unsupported block footprint {width}x{height}")


def as_image(pixels) -> np.ndarray:
    """Validate and return ``pixels`` as a ``(h, w, 3)`` uint8 array."""
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise DimensionError(f"expected an (h, w, 3) array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError("image must be at least 1x1")
    if arr.dtype != np.uint8:
        if np.issubdtype(arr.dtype, np.integer) and arr.size and (arr.min() < 0 or arr.max() > 255):
            raise DimensionError("channel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def padded_dims(width: int, height: int, size: BlockSize) -> tuple[int, int]:
    return (
        math.ceil(width / size.width) * size.width,
        math.ceil(height / size.height) * size.height,
    )


def pad_to_blocks(img: np.ndarray, size: BlockSize) -> np.ndarray:
    """Pad ``img`` up to whole blocks by replicating edge pixels.

    Returns ``img`` itself when it is already block aligned.
    """
    img = as_image(img)
    h, w = img.shape[:2]
    pw, ph = padded_dims(w, h, size)
    if (pw, ph) == (w, h):
        return img
    return np.pad(img, ((0, ph - h), (0, pw - w), (0, 0)), mode="edge")


def block_grid_dims(img: np.ndarray, size: BlockSize) -> tuple[int, int]:
    """Return ``(blocks_x, blocks_y)`` for an already padded image."""
    h, w = img.shape[:2]
    if w % size.width or h % size.height:
        raise DimensionError(f"{w}x{h} is not divisible by the {size} footprint")
    return w // size.width, h // size.height


def _block_slices(img: np.ndarray, bx: int, by: int, size: BlockSize):
    nx, ny = block_grid_dims(img, size)
    if not (0 <= bx < nx and 0 <= by < ny):
        raise BlockIndexError(f"block ({bx}, {by}) outside {nx}x{ny} grid")
    x0, y0 = bx * size.width, by * size.height
    return slice(y0, y0 + size.height), slice(x0, x0 + size.width)


def extract_block(img: np.ndarray, bx: int, by: int, size: BlockSize) -> np.ndarray:
    """Copy of the ``(bh, bw, 3)`` texel rectangle of block ``(bx, by)``."""
    rows, cols = _block_slices(img, bx, by, size)
    return img[rows, cols].copy()


def place_block(img: np.ndarray, bx: int, by: int, size: BlockSize, texels) -> None:
    """Write ``texels`` into block ``(bx, by)`` of ``img`` in place."""
    rows, cols = _block_slices(img, bx, by, size)
    texels = np.asarray(texels)
    if texels.shape != (size.height, size.width, 3):
        raise DimensionError(f"texels of shape {texels.shape} do not fit a {size} block")
    img[rows, cols] = texels


def crop(img: np.ndarray, width: int, height: int) -> np.ndarray:
    """Top-left ``width`` x ``height`` sub-image."""
    h, w = img.shape[:2]
    if width < 1 or height < 1 or width > w or height > h:
        raise DimensionError(f"cannot crop {w}x{h} to {width}x{height}")
    if (width, height) == (w, h):
        return img
    return img[:height, :width]


def to_blocks(img: np.ndarray, size: BlockSize) -> np.ndarray:
    """View a padded image as ``(blocks_y, blocks_x, bh, bw, 3)``."""
    nx, ny = block_grid_dims(img, size)
    return img.reshape(ny, size.height, nx, size.width, 3).swapaxes(1, 2)


def from_blocks(blocks: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_blocks`; returns a contiguous image."""
    ny, nx, bh, bw, _ = blocks.shape
    return np.ascontiguousarray(blocks.swapaxes(1, 2)).reshape(ny * bh, nx * bw, 3)
