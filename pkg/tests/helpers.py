"""Shared test utilities: the astcenc reference decoder and image sources."""

import os
from pathlib import Path

import numpy as np

from prunedastc.image import BlockSize


def reference_decode(payload: bytes, block: BlockSize, width: int, height: int) -> np.ndarray:
    """Decode raster-order blocks with ARM's astcenc (LDR, 8-bit output)."""
    import astc_encoder as ae

    cfg = ae.ASTCConfig(ae.ASTCProfile.LDR, block.width, block.height, 1, 0, ae.ASTCConfigFlags.USE_DECODE_UNORM8)
    ctx = ae.ASTCContext(cfg)
    img = ae.ASTCImage(ae.ASTCType.U8, width, height, 1)
    out = ctx.decompress(payload, img, ae.ASTCSwizzle())
    return np.frombuffer(out.data, np.uint8).reshape(height, width, 4)[..., :3].copy()


def natural_image_paths() -> list[Path]:
    """Photographs of at least 512x512 shipped with installed packages."""
    import matplotlib
    import skimage.data

    sk = Path(os.path.dirname(skimage.data.__file__))
    mpl = Path(matplotlib.get_data_path()) / "sample_data"
    return [
        sk / "astronaut.png",
        mpl / "grace_hopper.jpg",
        sk / "hubble_deep_field.jpg",
        sk / "retina.jpg",
    ]


def random_image(rng, height, width, smooth=False):
    if not smooth:
        return rng.integers(0, 256, (height, width, 3), dtype=np.uint8)
    yy, xx = np.mgrid[:height, :width]
    phase = rng.uniform(0, 2 * np.pi, 3)
    freq = rng.uniform(0.01, 0.2, 3)
    chans = [127.5 + 120 * np.sin(freq[c] * (xx + 0.7 * yy) + phase[c]) for c in range(3)]
    img = np.stack(chans, -1) + rng.normal(0, 6, (height, width, 3))
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def split_blocks(img: np.ndarray, size: BlockSize) -> np.ndarray:
    """Block-aligned image -> (n, bh, bw, 3) in raster order, by slicing."""
    h, w = img.shape[:2]
    out = []
    for y in range(0, h, size.height):
        for x in range(0, w, size.width):
            out.append(img[y : y + size.height, x : x + size.width])
    return np.stack(out)


def tile_blocks(blocks: np.ndarray, nbx: int) -> np.ndarray:
    """(n, bh, bw, 3) -> image with ``nbx`` blocks per row."""
    rows = [np.concatenate(list(blocks[i : i + nbx]), axis=1) for i in range(0, len(blocks), nbx)]
    return np.concatenate(rows, axis=0)
