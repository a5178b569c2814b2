import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prunedastc.errors import BlockIndexError, DimensionError
from prunedastc.image import (
    BlockSize,
    as_image,
    block_grid_dims,
    crop,
    extract_block,
    pad_to_blocks,
    padded_dims,
    place_block,
)

SIZES = list(BlockSize)


@st.composite
def images(draw, max_side=30):
    h = draw(st.integers(1, max_side))
    w = draw(st.integers(1, max_side))
    seed = draw(st.integers(0, 2**32 - 1))
    return np.random.default_rng(seed).integers(0, 256, (h, w, 3), dtype=np.uint8)


def test_block_size_parse():
    assert BlockSize.parse("12x12") is BlockSize.B12x12
    assert BlockSize.parse("8X8") is BlockSize.B8x8
    assert str(BlockSize.B8x8) == "8x8"
    with pytest.raises(ValueError):
        BlockSize.parse("6x6")


@pytest.mark.parametrize(
    "dims, size, expected",
    [
        ((2048, 1024), BlockSize.B12x12, (2052, 1032)),
        ((2048, 1024), BlockSize.B8x8, (2048, 1024)),
        ((1, 1), BlockSize.B8x8, (8, 8)),
        ((13, 25), BlockSize.B12x12, (24, 36)),
    ],
)
def test_padded_dims(dims, size, expected):
    assert padded_dims(*dims, size) == expected


def test_pad_cityscapes_frame():
    img = np.zeros((1024, 2048, 3), np.uint8)
    assert pad_to_blocks(img, BlockSize.B12x12).shape == (1032, 2052, 3)
    assert pad_to_blocks(img, BlockSize.B8x8) is img


def test_pad_single_pixel():
    img = np.array([[[7, 8, 9]]], np.uint8)
    out = pad_to_blocks(img, BlockSize.B8x8)
    assert out.shape == (8, 8, 3)
    assert (out == (7, 8, 9)).all()


def test_pad_replicates_edges():
    img = np.arange(2 * 3 * 3, dtype=np.uint8).reshape(2, 3, 3)
    out = pad_to_blocks(img, BlockSize.B8x8)
    for y in range(8):
        for x in range(8):
            assert (out[y, x] == img[min(y, 1), min(x, 2)]).all()


@settings(max_examples=60, deadline=None)
@given(images(), st.sampled_from(SIZES))
def test_pad_crop_roundtrip(img, size):
    padded = pad_to_blocks(img, size)
    assert padded.shape[0] % size.height == 0 and padded.shape[1] % size.width == 0
    assert (crop(padded, img.shape[1], img.shape[0]) == img).all()
    # padding only copies existing edge values
    right = padded[: img.shape[0], img.shape[1] :]
    assert (right == img[:, -1:]).all()
    bottom = padded[img.shape[0] :]
    if bottom.size:
        assert (bottom == bottom[:1]).all() and (bottom[0, : img.shape[1]] == img[-1]).all()


@pytest.mark.parametrize(
    "dims, size, expected",
    [
        ((2052, 1032), BlockSize.B12x12, (171, 86)),
        ((2048, 1024), BlockSize.B8x8, (256, 128)),
        ((12, 12), BlockSize.B12x12, (1, 1)),
    ],
)
def test_block_grid_dims(dims, size, expected):
    img = np.zeros((dims[1], dims[0], 3), np.uint8)
    assert block_grid_dims(img, size) == expected


def test_block_grid_dims_rejects_unpadded():
    with pytest.raises(DimensionError):
        block_grid_dims(np.zeros((10, 12, 3), np.uint8), BlockSize.B12x12)


def test_extract_block():
    img = np.zeros((12, 24, 3), np.uint8)
    img[:, :12] = (10, 20, 30)
    img[:, 12:] = (200, 100, 50)
    assert (extract_block(img, 1, 0, BlockSize.B12x12) == (200, 100, 50)).all()
    assert (extract_block(img, 0, 0, BlockSize.B12x12) == img[:12, :12]).all()
    with pytest.raises(BlockIndexError):
        extract_block(img, 2, 0, BlockSize.B12x12)
    with pytest.raises(BlockIndexError):
        extract_block(img, 0, -1, BlockSize.B12x12)


def test_extract_constant_image():
    img = np.full((16, 16, 3), 77, np.uint8)
    assert (extract_block(img, 1, 1, BlockSize.B8x8) == 77).all()


def test_place_block():
    img = np.zeros((16, 24, 3), np.uint8)
    place_block(img, 2, 1, BlockSize.B8x8, np.full((8, 8, 3), 5, np.uint8))
    assert (img != 0).any(axis=2).sum() == 64
    assert (img[8:, 16:] == 5).all()
    with pytest.raises(BlockIndexError):
        place_block(img, 3, 0, BlockSize.B8x8, np.zeros((8, 8, 3), np.uint8))


@settings(max_examples=30, deadline=None)
@given(images(40), st.sampled_from(SIZES))
def test_extract_place_inverse(img, size):
    a = pad_to_blocks(img, size)
    b = np.zeros_like(a)
    nx, ny = block_grid_dims(a, size)
    for by in range(ny):
        for bx in range(nx):
            blk = extract_block(a, bx, by, size)
            before = a.copy()
            place_block(a, bx, by, size, blk)
            assert (a == before).all()
            place_block(b, bx, by, size, blk)
    assert (a == b).all()


def test_crop():
    img = np.zeros((1032, 2052, 3), np.uint8)
    assert crop(img, 2048, 1024).shape == (1024, 2048, 3)
    assert crop(img, 2052, 1032) is img
    with pytest.raises(DimensionError):
        crop(img, 2053, 10)


def test_as_image_validation():
    with pytest.raises(DimensionError):
        as_image(np.zeros((4, 4), np.uint8))
    with pytest.raises(DimensionError):
        as_image(np.zeros((0, 4, 3), np.uint8))
    with pytest.raises(DimensionError):
        as_image(np.full((2, 2, 3), 300))
    assert as_image(np.full((2, 2, 3), 3)).dtype == np.uint8
