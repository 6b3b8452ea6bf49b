"""Synthetic degradations: bicubic downsampling, Gaussian noise, JPEG round-trips."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image as PILImage

from .core import ChannelError, Image, PairaugError
from .resample import downsample_bicubic
from .rng import Rng, bulk_normals


class CodecError(PairaugError):
    pass


@dataclass(frozen=True)
class DegradeSpec:
    """Task selector: sr(s), gaussian(sigma on the 0-255 scale), jpeg(quality)."""

    task: str
    scale: int = 1
    sigma: float = 0.0
    quality: int = 0

    def __post_init__(self):
        if self.task == "sr":
            if self.scale not in (2, 3, 4):
                raise ValueError(f"sr scale must be 2, 3 or 4, got {self.scale}")
        elif self.task == "gaussian":
            if not 0.0 < self.sigma <= 255.0:
                raise ValueError(f"sigma must be in (0, 255], got {self.sigma}")
        elif self.task == "jpeg":
            if not 1 <= self.quality <= 100:
                raise ValueError(f"quality must be in [1, 100], got {self.quality}")
        else:
            raise ValueError(f"unknown task {self.task!r}")

    @property
    def pair_scale(self) -> int:
        return self.scale if self.task == "sr" else 1


def add_gaussian_noise(img: Image, sigma_255: float, rng: Rng) -> Image:
    """Add i.i.d. Normal(0, (sigma/255)^2) per sample, then clamp to [0, 1]."""
    if sigma_255 <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma_255}")
    field_seed = rng.next_u64()
    noise = bulk_normals(field_seed, img.data.size).reshape(img.data.shape)
    out = img.data.astype(np.float64) + (sigma_255 / 255.0) * noise
    return Image(np.clip(out, 0.0, 1.0).astype(np.float32))


def jpeg_roundtrip(img: Image, quality: int, return_bytes: bool = False):
    """Baseline JFIF encode (4:2:0 chroma subsampling) and decode.

    Returns the decoded Image, or (Image, raw bytes) when return_bytes is set.
    """
    if not 1 <= quality <= 100:
        raise ValueError(f"quality must be in [1, 100], got {quality}")
    if img.channels != 3:
        raise ChannelError("jpeg_roundtrip needs 3-channel images")
    arr = np.rint(img.data * 255.0).astype(np.uint8)
    buf = io.BytesIO()
    try:
        PILImage.fromarray(arr, mode="RGB").save(
            buf, format="JPEG", quality=quality, subsampling=2
        )
        buf.seek(0)
        with PILImage.open(buf) as dec:
            out = np.asarray(dec.convert("RGB"), dtype=np.float32) / 255.0
    except OSError as exc:
        raise CodecError(f"jpeg codec failure: {exc}") from exc
    if out.shape[:2] != arr.shape[:2]:
        raise CodecError("decoded dimensions differ from input")
    decoded = Image(out)
    if return_bytes:
        return decoded, buf.getvalue()
    return decoded


def make_sr_pair(hr: Image, s: int) -> tuple[Image, Image]:
    """Bicubic-downsample the clean image by s; returns (lr, hr)."""
    if s == 1:
        return hr, hr
    return downsample_bicubic(hr, s), hr


def degrade(img: Image, spec: DegradeSpec, rng: Rng):
    """Apply a degradation spec; returns (degraded input, clean target)."""
    if spec.task == "sr":
        return make_sr_pair(img, spec.scale)
    if spec.task == "gaussian":
        return add_gaussian_noise(img, spec.sigma, rng), img
    return jpeg_roundtrip(img, spec.quality), img
