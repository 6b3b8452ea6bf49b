"""Image container, aligned pairs, loss masks, and resolution-reshape primitives."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from PIL import Image as PILImage


class PairaugError(Exception):
    """Base class for all library errors."""


class DimensionError(PairaugError):
    pass


class ChannelError(PairaugError):
    pass


class SampleRangeError(PairaugError):
    pass


@dataclass(frozen=True)
class Image:
    """Unit-interval float32 image, shape (height, width, channels).

    Display images carry 1 or 3 channels; the space-to-depth reshape may
    produce s^2 * C channels. PNG I/O accepts only 1 or 3.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float32)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] < 1:
            raise ChannelError(f"expected (H, W, C) array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise SampleRangeError("image contains non-finite samples")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise SampleRangeError(
                f"samples outside [0,1]: min={arr.min()}, max={arr.max()}"
            )
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def same_shape(self, other: "Image") -> bool:
        return self.data.shape == other.data.shape

    @classmethod
    def load_png(cls, path) -> "Image":
        with PILImage.open(path) as im:
            if im.mode not in ("L", "RGB"):
                im = im.convert("RGB")
            arr = np.asarray(im, dtype=np.float32) / 255.0
        return cls(arr)

    def save_png(self, path) -> None:
        if self.channels not in (1, 3):
            raise ChannelError(f"PNG I/O needs 1 or 3 channels, got {self.channels}")
        arr = np.rint(np.clip(self.data, 0.0, 1.0) * 255.0).astype(np.uint8)
        if arr.shape[2] == 1:
            PILImage.fromarray(arr[:, :, 0], mode="L").save(path, format="PNG")
        else:
            PILImage.fromarray(arr, mode="RGB").save(path, format="PNG")


@dataclass(frozen=True)
class LossMask:
    """Per-pixel validity grid; invalid pixels are excluded from training loss."""

    valid: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.valid, dtype=bool)
        if arr.ndim != 2:
            raise DimensionError(f"mask must be 2-D, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "valid", arr)

    @property
    def height(self) -> int:
        return self.valid.shape[0]

    @property
    def width(self) -> int:
        return self.valid.shape[1]

    @classmethod
    def all_valid(cls, height: int, width: int) -> "LossMask":
        return cls(np.ones((height, width), dtype=bool))

    def save_png(self, path) -> None:
        PILImage.fromarray(self.valid).convert("1").save(path, format="PNG")

    @classmethod
    def load_png(cls, path) -> "LossMask":
        with PILImage.open(path) as im:
            arr = np.asarray(im.convert("L")) > 127
        return cls(arr)


@dataclass(frozen=True)
class AlignedPair:
    """Degraded/clean pair on a common pixel grid (LR already upsampled for SR)."""

    input: Image
    target: Image
    scale: int = 1
    source_id: str = ""

    def __post_init__(self):
        if self.input.data.shape != self.target.data.shape:
            raise DimensionError(
                f"input {self.input.data.shape} vs target {self.target.data.shape}"
            )
        if self.scale < 1:
            raise ValueError(f"scale must be >= 1, got {self.scale}")


@dataclass(frozen=True)
class AugRecord:
    """Everything needed to re-apply an augmentation bit-exactly."""

    method: str
    params: dict = field(default_factory=dict)
    item_seed: int = 0

    def to_dict(self) -> dict:
        return {"method": self.method, "params": self.params, "item_seed": self.item_seed}

    @classmethod
    def from_dict(cls, d: dict) -> "AugRecord":
        return cls(method=d["method"], params=d["params"], item_seed=d["item_seed"])


@dataclass(frozen=True)
class AugmentedSample:
    """Network-ready (input, target, loss mask, provenance) tuple."""

    input: Image
    target: Image
    loss_mask: LossMask
    record: AugRecord

    def __post_init__(self):
        if self.input.data.shape != self.target.data.shape:
            raise DimensionError("input/target shape mismatch")
        if (self.loss_mask.height, self.loss_mask.width) != (
            self.input.height,
            self.input.width,
        ):
            raise DimensionError("loss mask shape mismatch")


def desubpixel(img: Image, s: int) -> Image:
    """Space-to-depth: (sW, sH, C) -> (W, H, C*s^2), block (dy, dx) goes to
    channel c*s^2 + dy*s + dx."""
    if s == 1:
        return img
    h, w, c = img.data.shape
    if h % s or w % s:
        raise DimensionError(f"dimensions {w}x{h} not divisible by {s}")
    a = img.data.reshape(h // s, s, w // s, s, c)
    a = a.transpose(0, 2, 4, 1, 3).reshape(h // s, w // s, c * s * s)
    return Image(a)


def subpixel(img: Image, s: int) -> Image:
    """Depth-to-space; exact inverse of desubpixel."""
    if s == 1:
        return img
    h, w, cs = img.data.shape
    if cs % (s * s):
        raise ChannelError(f"channel count {cs} not divisible by {s * s}")
    c = cs // (s * s)
    a = img.data.reshape(h, w, c, s, s)
    a = a.transpose(0, 3, 1, 4, 2).reshape(h * s, w * s, c)
    return Image(a)
