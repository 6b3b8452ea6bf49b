"""Separable bicubic resampling (Catmull-Rom class, a = -0.5).

Conventions, pinned for reproducibility:
- pixel-center alignment: output center i maps to (i + 0.5) / scale - 0.5
  (upsample) or (i + 0.5) * scale - 0.5 (downsample) in input coordinates;
- edges clamp-replicate;
- downsampling stretches the kernel by s (support 2s) and renormalizes,
  i.e. antialiasing is on;
- results are clamped to [0, 1] since the cubic kernel overshoots.
"""

from __future__ import annotations

import numpy as np

from .core import AlignedPair, DimensionError, Image

KERNEL_A = -0.5
KERNEL_SUPPORT = 2.0


def cubic_kernel(x: np.ndarray, a: float = KERNEL_A) -> np.ndarray:
    """Keys cubic kernel: w(0)=1, w at other integers = 0, support 2."""
    x = np.abs(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(x)
    near = x <= 1.0
    far = (x > 1.0) & (x < 2.0)
    out[near] = (a + 2.0) * x[near] ** 3 - (a + 3.0) * x[near] ** 2 + 1.0
    out[far] = a * x[far] ** 3 - 5.0 * a * x[far] ** 2 + 8.0 * a * x[far] - 4.0 * a
    return out


def bicubic_weights(t: float) -> np.ndarray:
    """Normalized 4-tap weights for taps at offsets (-1-t, -t, 1-t, 2-t), t in [0, 1)."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"fractional offset must be in [0, 1), got {t}")
    w = cubic_kernel(np.array([1.0 + t, t, 1.0 - t, 2.0 - t]))
    return w / w.sum()


def _axis_taps(n_in: int, n_out: int, scale_num: int, scale_den: int):
    """Tap indices and weights for one axis.

    scale_num/scale_den is the input-to-output coordinate step (s/1 for
    downsample by s, 1/s for upsample by s). Kernel width stretches with
    the step when decimating.
    """
    step = scale_num / scale_den
    stretch = max(step, 1.0)
    support = KERNEL_SUPPORT * stretch
    centers = (np.arange(n_out, dtype=np.float64) + 0.5) * step - 0.5
    # taps cover the open interval (center - support, center + support)
    lo = np.floor(centers - support).astype(np.int64) + 1
    ntaps = int(np.ceil(support * 2.0))
    offsets = np.arange(ntaps, dtype=np.int64)
    idx = lo[:, None] + offsets[None, :]
    dist = (idx.astype(np.float64) - centers[:, None]) / stretch
    weights = cubic_kernel(dist)
    weights /= weights.sum(axis=1, keepdims=True)
    idx = np.clip(idx, 0, n_in - 1)
    return idx, weights


def _resample_axis(data: np.ndarray, idx: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # data: (n_in, ...) -> (n_out, ...)
    gathered = data[idx]  # (n_out, ntaps, ...)
    w = weights.reshape(weights.shape + (1,) * (data.ndim - 1))
    return (gathered * w).sum(axis=1)


def _resample(img: Image, scale_num: int, scale_den: int) -> Image:
    h, w, _ = img.data.shape
    out_h = h * scale_den // scale_num
    out_w = w * scale_den // scale_num
    idx_y, w_y = _axis_taps(h, out_h, scale_num, scale_den)
    idx_x, w_x = _axis_taps(w, out_w, scale_num, scale_den)
    data = img.data.astype(np.float64)
    data = _resample_axis(data, idx_y, w_y)
    data = _resample_axis(data.transpose(1, 0, 2), idx_x, w_x).transpose(1, 0, 2)
    return Image(np.clip(data, 0.0, 1.0).astype(np.float32))


def upsample_bicubic(img: Image, s: int) -> Image:
    if s < 1:
        raise ValueError(f"scale must be >= 1, got {s}")
    if s == 1:
        return img
    return _resample(img, 1, s)


def downsample_bicubic(img: Image, s: int) -> Image:
    if s < 1:
        raise ValueError(f"scale must be >= 1, got {s}")
    if s == 1:
        return img
    if img.height % s or img.width % s:
        raise DimensionError(
            f"dimensions {img.width}x{img.height} not divisible by {s}"
        )
    return _resample(img, s, 1)


def align_pair(lr: Image, hr: Image, s: int, source_id: str = "") -> AlignedPair:
    """Upsample the LR image onto the HR grid and bundle the pair."""
    if hr.width != lr.width * s or hr.height != lr.height * s:
        raise DimensionError(
            f"hr {hr.width}x{hr.height} is not {s}x the lr {lr.width}x{lr.height}"
        )
    if hr.channels != lr.channels:
        raise DimensionError("channel count mismatch between lr and hr")
    return AlignedPair(
        input=upsample_bicubic(lr, s), target=hr, scale=s, source_id=source_id
    )
