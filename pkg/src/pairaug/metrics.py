"""PSNR, SSIM, Y-channel conversion, and absolute residual maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .core import ChannelError, DimensionError, Image

# BT.601 studio-range luma, the conversion used throughout the SR literature
_Y_COEFFS = np.array([65.481, 128.553, 24.966]) / 255.0
_Y_OFFSET = 16.0 / 255.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


@dataclass(frozen=True)
class MetricReport:
    psnr_db: float
    ssim: float
    channel_mode: str  # "y_only" or "rgb"

    def to_dict(self) -> dict:
        return {
            "psnr_db": self.psnr_db if math.isfinite(self.psnr_db) else "inf",
            "ssim": self.ssim,
            "channel_mode": self.channel_mode,
        }


def rgb_to_y(img: Image) -> Image:
    """Studio-range BT.601 luma of a unit-interval RGB image."""
    if img.channels != 3:
        raise ChannelError(f"rgb_to_y needs 3 channels, got {img.channels}")
    y = img.data.astype(np.float64) @ _Y_COEFFS + _Y_OFFSET
    return Image(np.clip(y, 0.0, 1.0).astype(np.float32)[:, :, None])


def _check_dims(a: Image, b: Image) -> None:
    if a.data.shape != b.data.shape:
        raise DimensionError(f"shape mismatch: {a.data.shape} vs {b.data.shape}")


def psnr(a: Image, b: Image, peak: float = 1.0) -> float:
    """10 log10(peak^2 / MSE); +inf for identical images."""
    _check_dims(a, b)
    if peak <= 0:
        raise ValueError(f"peak must be > 0, got {peak}")
    mse = float(np.mean((a.data.astype(np.float64) - b.data.astype(np.float64)) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    half = (size - 1) / 2.0
    coords = np.arange(size, dtype=np.float64) - half
    g = np.exp(-(coords ** 2) / (2.0 * sigma ** 2))
    w = np.outer(g, g)
    return w / w.sum()


def ssim(a: Image, b: Image) -> float:
    """Mean local SSIM over valid 11x11 Gaussian windows, dynamic range 1."""
    _check_dims(a, b)
    if a.channels != 1:
        raise ChannelError("ssim operates on single-channel images")
    if min(a.height, a.width) < SSIM_WINDOW:
        raise DimensionError(
            f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW}"
        )
    return float(np.mean(ssim_map(a, b)))


def ssim_map(a: Image, b: Image) -> np.ndarray:
    """Per-window SSIM values (valid positions only)."""
    x = a.data[:, :, 0].astype(np.float64)
    y = b.data[:, :, 0].astype(np.float64)
    w = gaussian_window()
    c1 = SSIM_K1 ** 2
    c2 = SSIM_K2 ** 2
    mu_x = fftconvolve(x, w, mode="valid")
    mu_y = fftconvolve(y, w, mode="valid")
    xx = fftconvolve(x * x, w, mode="valid") - mu_x ** 2
    yy = fftconvolve(y * y, w, mode="valid") - mu_y ** 2
    xy = fftconvolve(x * y, w, mode="valid") - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * xy + c2)
    den = (mu_x ** 2 + mu_y ** 2 + c1) * (xx + yy + c2)
    return num / den


def residual_map(a: Image, b: Image) -> Image:
    """Per-sample absolute difference |a - b|."""
    _check_dims(a, b)
    return Image(np.abs(a.data.astype(np.float64) - b.data.astype(np.float64))
                 .astype(np.float32))


def evaluate(a: Image, b: Image, channel_mode: str = "y_only") -> MetricReport:
    """PSNR/SSIM report for a pair, on the luma channel or over RGB."""
    _check_dims(a, b)
    if channel_mode == "y_only":
        ya = rgb_to_y(a) if a.channels == 3 else a
        yb = rgb_to_y(b) if b.channels == 3 else b
        return MetricReport(psnr(ya, yb), ssim(ya, yb), "y_only")
    if channel_mode == "rgb":
        p = psnr(a, b)
        chans = range(a.channels)
        s = float(np.mean([
            ssim(Image(a.data[:, :, c:c + 1]), Image(b.data[:, :, c:c + 1]))
            for c in chans
        ]))
        return MetricReport(p, s, "rgb")
    raise ValueError(f"unknown channel_mode {channel_mode!r}")
