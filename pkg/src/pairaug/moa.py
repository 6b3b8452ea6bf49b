"""Mixture-of-augmentations dispatch.

With probability p a sample is augmented by one method drawn from a
weighted pool; otherwise it passes through untouched. Rng consumption
order is fixed (apply draw, choice draw, then the method's own draws) so
forcing a selection is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import augment
from .core import AlignedPair, AugmentedSample, DimensionError, PairaugError
from .rng import Rng

POOL = ("cutout", "cutmix", "mixup", "cutmixup", "rgb_permute", "blend", "cutblur")
TWO_SAMPLE = frozenset({"cutmix", "mixup", "cutmixup"})


class PolicyError(PairaugError):
    pass


@dataclass(frozen=True)
class PolicyEntry:
    method: str
    weight: float = 1.0
    # alpha: method hyper-parameter; tuple for cutmixup, None for rgb_permute
    alpha: object = None

    def resolved_alpha(self):
        if self.alpha is not None:
            return self.alpha
        return augment.DEFAULT_ALPHAS.get(self.method)


@dataclass(frozen=True)
class MoaPolicy:
    p: float
    entries: tuple = ()

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise PolicyError(f"apply probability must be in [0, 1], got {self.p}")
        entries = tuple(self.entries)
        for e in entries:
            if e.method not in POOL:
                raise PolicyError(f"unknown method {e.method!r}")
            if e.weight < 0:
                raise PolicyError(f"negative weight for {e.method}")
        if self.p > 0 and not any(e.weight > 0 for e in entries):
            raise PolicyError("p > 0 requires at least one positive-weight entry")
        object.__setattr__(self, "entries", entries)

    @property
    def total_weight(self) -> float:
        return sum(e.weight for e in self.entries)


def _uniform_policy(p: float) -> MoaPolicy:
    return MoaPolicy(p=p, entries=tuple(PolicyEntry(m) for m in POOL))


PRESETS = {
    "default": _uniform_policy(1.0),
    "small-model": _uniform_policy(0.2),
    "restoration": _uniform_policy(0.6),
    "realsr": MoaPolicy(
        p=1.0,
        entries=tuple(
            PolicyEntry(m, 4.0 if m == "cutblur" else 1.0) for m in POOL
        ),
    ),
}


def get_preset(name: str) -> MoaPolicy:
    try:
        return PRESETS[name]
    except KeyError:
        raise PolicyError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}"
        ) from None


def select_method(policy: MoaPolicy, rng: Rng) -> Optional[str]:
    """None with probability 1-p, else a method with probability weight/sum."""
    u_apply = rng.uniform()
    if u_apply >= policy.p:
        return None
    u_choice = rng.uniform() * policy.total_weight
    acc = 0.0
    for e in policy.entries:
        acc += e.weight
        if u_choice < acc:
            return e.method
    return policy.entries[-1].method


def apply_moa(
    pair: AlignedPair,
    partner_provider: Callable[[], AlignedPair],
    policy: MoaPolicy,
    rng: Rng,
    item_seed: int = 0,
) -> AugmentedSample:
    """Select one method per the policy and apply it.

    Two-sample methods pull exactly one partner from `partner_provider`;
    single-sample methods never invoke it.
    """
    method = select_method(policy, rng)
    if method is None:
        return augment.passthrough(pair, item_seed)
    alpha = next(
        e.resolved_alpha() for e in policy.entries if e.method == method
    )
    if method in TWO_SAMPLE:
        partner = partner_provider()
        if partner.input.data.shape != pair.input.data.shape:
            raise DimensionError("partner pair shape mismatch")
        if method == "cutmix":
            return augment.cutmix(pair, partner, alpha, rng, item_seed)
        if method == "mixup":
            return augment.mixup(pair, partner, alpha, rng, item_seed)
        a1, a2 = alpha
        return augment.cutmixup(pair, partner, a1, a2, rng, item_seed)
    if method == "cutout":
        return augment.cutout(pair, alpha, rng, item_seed)
    if method == "rgb_permute":
        return augment.rgb_permute(pair, rng, item_seed)
    if method == "blend":
        return augment.blend(pair, alpha, rng, item_seed)
    return augment.cutblur(pair, alpha, rng, item_seed)
