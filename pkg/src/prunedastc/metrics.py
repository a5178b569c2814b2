"""Rate and distortion metrics: PSNR, SSIM and bits per pixel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .errors import DimensionError

#: PSNR of two identical images.
PSNR_INF = math.inf

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
PEAK = 255.0

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class MetricsReport:
    psnr_db: float
    ssim: float
    bpp: float | None = None

    def as_dict(self) -> dict:
        return {"psnr_db": self.psnr_db, "ssim": self.ssim, "bpp": self.bpp}


def _check_pair(ref, dist) -> tuple[np.ndarray, np.ndarray]:
    ref = np.asarray(ref)
    dist = np.asarray(dist)
    if ref.shape != dist.shape:
        raise DimensionError(f"image shapes differ: {ref.shape} vs {dist.shape}")
    return ref, dist


def mse(ref, dist) -> float:
    ref, dist = _check_pair(ref, dist)
    diff = ref.astype(np.int64) - dist.astype(np.int64)
    return int((diff * diff).sum()) / diff.size


def psnr(ref, dist) -> float:
    """PSNR in dB over all channels of all pixels; ``inf`` when identical."""
    err = mse(ref, dist)
    if err == 0:
        return PSNR_INF
    return 10.0 * math.log10(PEAK * PEAK / err)


def luma(img) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    r, g, b = LUMA_WEIGHTS
    return r * img[..., 0] + g * img[..., 1] + b * img[..., 2]


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    x = np.arange(size) - (size - 1) / 2
    g = np.exp(-(x * x) / (2 * sigma * sigma))
    return g / g.sum()


def _filter_valid(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    half = len(kernel) // 2
    out = correlate1d(plane, kernel, axis=0, mode="constant")
    out = correlate1d(out, kernel, axis=1, mode="constant")
    return out[half : plane.shape[0] - half, half : plane.shape[1] - half]


def ssim_map(ref, dist) -> np.ndarray:
    """Per-window SSIM of the luma planes, one value per valid position."""
    ref, dist = _check_pair(ref, dist)
    if ref.shape[0] < SSIM_WINDOW or ref.shape[1] < SSIM_WINDOW:
        raise DimensionError(f"SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels")
    x = luma(ref)
    y = luma(dist)
    k = gaussian_window()
    mu_x = _filter_valid(x, k)
    mu_y = _filter_valid(y, k)
    var_x = _filter_valid(x * x, k) - mu_x * mu_x
    var_y = _filter_valid(y * y, k) - mu_y * mu_y
    cov = _filter_valid(x * y, k) - mu_x * mu_y
    c1 = (SSIM_K1 * PEAK) ** 2
    c2 = (SSIM_K2 * PEAK) ** 2
    num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return num / den


def ssim(ref, dist) -> float:
    """Mean SSIM on BT.601 luma with an 11x11, sigma 1.5 Gaussian window."""
    return float(ssim_map(ref, dist).mean())


def bpp(payload_bytes: int, width: int, height: int) -> float:
    """Bits per pixel of a payload (container header excluded)."""
    if width <= 0 or height <= 0:
        raise DimensionError("bpp of an empty image is undefined")
    return 8 * payload_bytes / (width * height)


def compare(ref, dist, payload_bytes: int | None = None) -> MetricsReport:
    ref, dist = _check_pair(ref, dist)
    rate = None if payload_bytes is None else bpp(payload_bytes, ref.shape[1], ref.shape[0])
    return MetricsReport(psnr(ref, dist), ssim(ref, dist), rate)
