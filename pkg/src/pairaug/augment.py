"""Pixel-domain augmentation operators on aligned degraded/clean pairs.

Every operator samples its parameters from the caller's Rng in a fixed,
documented order, records them in an AugRecord, and can be replayed
bit-exactly from that record via `replay`.

Defaults follow the curated pool: cutout 0.001, cutmix 0.7, mixup 1.2,
cutmixup (0.7, 1.2), blend 0.6, cutblur 0.7.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .core import (
    AlignedPair,
    AugmentedSample,
    AugRecord,
    ChannelError,
    DimensionError,
    Image,
    LossMask,
)
from .rng import Rng, bulk_uniforms

DEFAULT_ALPHAS = {
    "cutout": 0.001,
    "cutmix": 0.7,
    "mixup": 1.2,
    "cutmixup": (0.7, 1.2),
    "blend": 0.6,
    "cutblur": 0.7,
}

_PERMS = list(permutations(range(3)))  # 6 RGB permutations, fixed order


@dataclass(frozen=True)
class RectMask:
    """Axis-aligned cut region. `lam` is the pre-clip side-fraction draw."""

    x: int
    y: int
    w: int
    h: int
    lam: float

    def slices(self):
        return slice(self.y, self.y + self.h), slice(self.x, self.x + self.w)

    def area(self) -> int:
        return self.w * self.h


def sample_cutmix_rect(width: int, height: int, alpha: float, rng: Rng) -> RectMask:
    """Rect with side fraction lambda ~ Normal(alpha, var 0.01), clamped to [0,1].

    Draw order: lambda, x, y. Top-left uniform over the pixel grid; the
    rect is clipped to the image bounds.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    lam = rng.normal(alpha, 0.1)
    lam_c = min(max(lam, 0.0), 1.0)
    w = int(round(lam_c * width))
    h = int(round(lam_c * height))
    x = rng.randrange(width)
    y = rng.randrange(height)
    w = min(w, width - x)
    h = min(h, height - y)
    return RectMask(x=x, y=y, w=w, h=h, lam=lam)


def _rect_params(rect: RectMask) -> dict:
    return {"x": rect.x, "y": rect.y, "w": rect.w, "h": rect.h, "lambda": rect.lam}


def _rect_from_params(p: dict) -> RectMask:
    return RectMask(x=p["x"], y=p["y"], w=p["w"], h=p["h"], lam=p["lambda"])


def _sample(inp: np.ndarray, tgt: np.ndarray, record: AugRecord,
            mask: LossMask | None = None) -> AugmentedSample:
    input_img = Image(np.clip(inp, 0.0, 1.0).astype(np.float32))
    target_img = Image(np.clip(tgt, 0.0, 1.0).astype(np.float32))
    if mask is None:
        mask = LossMask.all_valid(input_img.height, input_img.width)
    return AugmentedSample(input=input_img, target=target_img,
                           loss_mask=mask, record=record)


def _check_same_shape(a: AlignedPair, b: AlignedPair) -> None:
    if a.input.data.shape != b.input.data.shape:
        raise DimensionError(
            f"pair shapes differ: {a.input.data.shape} vs {b.input.data.shape}"
        )


def cutblur(pair: AlignedPair, alpha: float = 0.7, rng: Rng | None = None,
            item_seed: int = 0) -> AugmentedSample:
    """Cut-and-paste between the degraded input and its clean target.

    Builds both directions (clean patch on degraded canvas and vice versa)
    and picks one uniformly. The target stays the original clean image.
    """
    rng = rng if rng is not None else Rng(item_seed)
    rect = sample_cutmix_rect(pair.input.width, pair.input.height, alpha, rng)
    direction = rng.randrange(2)  # 0: clean inside rect, 1: degraded inside rect
    ys, xs = rect.slices()
    inp = pair.input.data.copy()
    if direction == 0:
        inp[ys, xs] = pair.target.data[ys, xs]
    else:
        inp = pair.target.data.copy()
        inp[ys, xs] = pair.input.data[ys, xs]
    record = AugRecord("cutblur", {**_rect_params(rect), "direction": direction},
                       item_seed)
    return _sample(inp, pair.target.data, record)


def cutout(pair: AlignedPair, ratio: float = 0.001, rng: Rng | None = None,
           item_seed: int = 0) -> AugmentedSample:
    """Zero out each pixel of the input independently with probability `ratio`.

    Dropped pixels are zeroed across all channels and flagged invalid in
    the loss mask so they can be discarded from the training loss.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError(f"ratio must be in [0, 1], got {ratio}")
    rng = rng if rng is not None else Rng(item_seed)
    mask_seed = rng.next_u64()
    h, w = pair.input.height, pair.input.width
    drop = bulk_uniforms(mask_seed, h * w).reshape(h, w) < ratio
    inp = pair.input.data.copy()
    inp[drop] = 0.0
    record = AugRecord("cutout", {"ratio": ratio, "mask_seed": mask_seed}, item_seed)
    return _sample(inp, pair.target.data, record, LossMask(~drop))


def cutmix(a: AlignedPair, b: AlignedPair, alpha: float = 0.7,
           rng: Rng | None = None, item_seed: int = 0) -> AugmentedSample:
    """Paste a co-located rectangle from pair b into pair a (input and target)."""
    _check_same_shape(a, b)
    rng = rng if rng is not None else Rng(item_seed)
    rect = sample_cutmix_rect(a.input.width, a.input.height, alpha, rng)
    ys, xs = rect.slices()
    inp = a.input.data.copy()
    tgt = a.target.data.copy()
    inp[ys, xs] = b.input.data[ys, xs]
    tgt[ys, xs] = b.target.data[ys, xs]
    record = AugRecord("cutmix", _rect_params(rect), item_seed)
    return _sample(inp, tgt, record)


def mixup(a: AlignedPair, b: AlignedPair, alpha: float = 1.2,
          rng: Rng | None = None, item_seed: int = 0,
          lam: float | None = None) -> AugmentedSample:
    """Blend two pairs with a single lambda ~ Beta(alpha, alpha)."""
    _check_same_shape(a, b)
    rng = rng if rng is not None else Rng(item_seed)
    if lam is None:
        lam = rng.beta(alpha, alpha)
    inp = lam * a.input.data.astype(np.float64) + (1.0 - lam) * b.input.data
    tgt = lam * a.target.data.astype(np.float64) + (1.0 - lam) * b.target.data
    record = AugRecord("mixup", {"lambda": lam}, item_seed)
    return _sample(inp, tgt, record)


def cutmixup(a: AlignedPair, b: AlignedPair, alpha1: float = 0.7,
             alpha2: float = 1.2, rng: Rng | None = None,
             item_seed: int = 0) -> AugmentedSample:
    """CutMix where the pasted content is the Mixup blend of a and b.

    Draw order: mixup lambda first, then the rect.
    """
    _check_same_shape(a, b)
    rng = rng if rng is not None else Rng(item_seed)
    lam = rng.beta(alpha2, alpha2)
    rect = sample_cutmix_rect(a.input.width, a.input.height, alpha1, rng)
    ys, xs = rect.slices()
    mix_inp = lam * a.input.data.astype(np.float64) + (1.0 - lam) * b.input.data
    mix_tgt = lam * a.target.data.astype(np.float64) + (1.0 - lam) * b.target.data
    inp = a.input.data.astype(np.float64).copy()
    tgt = a.target.data.astype(np.float64).copy()
    inp[ys, xs] = mix_inp[ys, xs]
    tgt[ys, xs] = mix_tgt[ys, xs]
    record = AugRecord("cutmixup", {**_rect_params(rect), "mix_lambda": lam}, item_seed)
    return _sample(inp, tgt, record)


def rgb_permute(pair: AlignedPair, rng: Rng | None = None,
                item_seed: int = 0) -> AugmentedSample:
    """Apply one of the 6 channel permutations to input and target alike."""
    if pair.input.channels != 3:
        raise ChannelError("rgb_permute needs 3-channel images")
    rng = rng if rng is not None else Rng(item_seed)
    perm = _PERMS[rng.randrange(6)]
    inp = pair.input.data[:, :, perm]
    tgt = pair.target.data[:, :, perm]
    record = AugRecord("rgb_permute", {"perm": list(perm)}, item_seed)
    return _sample(inp, tgt, record)


def blend(pair: AlignedPair, alpha: float = 0.6, rng: Rng | None = None,
          item_seed: int = 0) -> AugmentedSample:
    """Blend both images toward one random constant color.

    Draw order: three color channels ~ Unif(0,1), then the keep ratio
    v ~ Unif(alpha, 1). Output is v * image + (1 - v) * color.
    """
    if pair.input.channels != 3:
        raise ChannelError("blend needs 3-channel images")
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    rng = rng if rng is not None else Rng(item_seed)
    color = [rng.uniform(), rng.uniform(), rng.uniform()]
    v = rng.uniform_range(alpha, 1.0)
    c = np.asarray(color, dtype=np.float64)
    inp = v * pair.input.data.astype(np.float64) + (1.0 - v) * c
    tgt = v * pair.target.data.astype(np.float64) + (1.0 - v) * c
    record = AugRecord("blend", {"color": color, "v": v}, item_seed)
    return _sample(inp, tgt, record)


def _dihedral(data: np.ndarray, k: int) -> np.ndarray:
    """Element k of the dihedral group of the square: k%4 quarter-turns,
    preceded by a horizontal flip when k >= 4."""
    if k >= 4:
        data = data[:, ::-1]
    return np.rot90(data, k % 4, axes=(0, 1))


def flip_rotate(pair: AlignedPair, rng: Rng | None = None,
                item_seed: int = 0) -> AugmentedSample:
    """Uniform draw over the 8 flip/rotation symmetries, same for input and target."""
    rng = rng if rng is not None else Rng(item_seed)
    k = rng.randrange(8)
    inp = _dihedral(pair.input.data, k)
    tgt = _dihedral(pair.target.data, k)
    record = AugRecord("flip_rotate", {"k": k}, item_seed)
    return _sample(inp, tgt, record)


def passthrough(pair: AlignedPair, item_seed: int = 0) -> AugmentedSample:
    record = AugRecord("none", {}, item_seed)
    return _sample(pair.input.data, pair.target.data, record)


def flip_rotate_pair(pair: AlignedPair, rng: Rng) -> AlignedPair:
    """flip_rotate returning an AlignedPair, for use as a pre-augmentation stage."""
    k = rng.randrange(8)
    return apply_dihedral_pair(pair, k)


def apply_dihedral_pair(pair: AlignedPair, k: int) -> AlignedPair:
    return AlignedPair(
        input=Image(_dihedral(pair.input.data, k)),
        target=Image(_dihedral(pair.target.data, k)),
        scale=pair.scale,
        source_id=pair.source_id,
    )


def replay(record: AugRecord, pair: AlignedPair,
           partner: AlignedPair | None = None) -> AugmentedSample:
    """Re-apply a recorded augmentation bit-exactly from its parameters."""
    method = record.method
    p = record.params
    if method == "none":
        return passthrough(pair, record.item_seed)
    if method == "flip_rotate":
        out = _dihedral_sample(pair, p["k"], record)
        return out
    if method == "cutblur":
        rect = _rect_from_params(p)
        ys, xs = rect.slices()
        if p["direction"] == 0:
            inp = pair.input.data.copy()
            inp[ys, xs] = pair.target.data[ys, xs]
        else:
            inp = pair.target.data.copy()
            inp[ys, xs] = pair.input.data[ys, xs]
        return _sample(inp, pair.target.data, record)
    if method == "cutout":
        h, w = pair.input.height, pair.input.width
        drop = bulk_uniforms(p["mask_seed"], h * w).reshape(h, w) < p["ratio"]
        inp = pair.input.data.copy()
        inp[drop] = 0.0
        return _sample(inp, pair.target.data, record, LossMask(~drop))
    if method == "cutmix":
        if partner is None:
            raise ValueError("cutmix replay needs a partner pair")
        rect = _rect_from_params(p)
        ys, xs = rect.slices()
        inp = pair.input.data.copy()
        tgt = pair.target.data.copy()
        inp[ys, xs] = partner.input.data[ys, xs]
        tgt[ys, xs] = partner.target.data[ys, xs]
        return _sample(inp, tgt, record)
    if method == "mixup":
        if partner is None:
            raise ValueError("mixup replay needs a partner pair")
        lam = p["lambda"]
        inp = lam * pair.input.data.astype(np.float64) + (1 - lam) * partner.input.data
        tgt = lam * pair.target.data.astype(np.float64) + (1 - lam) * partner.target.data
        return _sample(inp, tgt, record)
    if method == "cutmixup":
        if partner is None:
            raise ValueError("cutmixup replay needs a partner pair")
        lam = p["mix_lambda"]
        rect = _rect_from_params(p)
        ys, xs = rect.slices()
        mix_inp = lam * pair.input.data.astype(np.float64) + (1 - lam) * partner.input.data
        mix_tgt = lam * pair.target.data.astype(np.float64) + (1 - lam) * partner.target.data
        inp = pair.input.data.astype(np.float64).copy()
        tgt = pair.target.data.astype(np.float64).copy()
        inp[ys, xs] = mix_inp[ys, xs]
        tgt[ys, xs] = mix_tgt[ys, xs]
        return _sample(inp, tgt, record)
    if method == "rgb_permute":
        perm = list(p["perm"])
        return _sample(pair.input.data[:, :, perm], pair.target.data[:, :, perm], record)
    if method == "blend":
        c = np.asarray(p["color"], dtype=np.float64)
        v = p["v"]
        inp = v * pair.input.data.astype(np.float64) + (1 - v) * c
        tgt = v * pair.target.data.astype(np.float64) + (1 - v) * c
        return _sample(inp, tgt, record)
    raise ValueError(f"unknown method {method!r}")


def _dihedral_sample(pair: AlignedPair, k: int, record: AugRecord) -> AugmentedSample:
    return _sample(_dihedral(pair.input.data, k), _dihedral(pair.target.data, k), record)
