"""pairaug: deterministic paired-image augmentation, degradation synthesis,
and PSNR/SSIM evaluation for low-level vision pipelines."""

from .core import (
    AlignedPair,
    AugmentedSample,
    AugRecord,
    Image,
    LossMask,
    PairaugError,
    desubpixel,
    subpixel,
)
from .rng import Rng, derive_item_seed
from .resample import align_pair, bicubic_weights, downsample_bicubic, upsample_bicubic
from .augment import (
    RectMask,
    blend,
    cutblur,
    cutmix,
    cutmixup,
    cutout,
    flip_rotate,
    mixup,
    replay,
    rgb_permute,
    sample_cutmix_rect,
)
from .moa import MoaPolicy, PolicyEntry, apply_moa, get_preset, select_method
from .degrade import DegradeSpec, add_gaussian_noise, jpeg_roundtrip, make_sr_pair
from .metrics import MetricReport, psnr, residual_map, rgb_to_y, ssim

__version__ = "0.1.0"

__all__ = [
    "AlignedPair", "AugmentedSample", "AugRecord", "Image", "LossMask",
    "PairaugError", "desubpixel", "subpixel", "Rng", "derive_item_seed",
    "align_pair", "bicubic_weights", "downsample_bicubic", "upsample_bicubic",
    "RectMask", "blend", "cutblur", "cutmix", "cutmixup", "cutout",
    "flip_rotate", "mixup", "replay", "rgb_permute", "sample_cutmix_rect",
    "MoaPolicy", "PolicyEntry", "apply_moa", "get_preset", "select_method",
    "DegradeSpec", "add_gaussian_noise", "jpeg_roundtrip", "make_sr_pair",
    "MetricReport", "psnr", "residual_map", "rgb_to_y", "ssim",
]
