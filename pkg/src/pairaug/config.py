"""Run configuration: flat key = value files, policy construction, presets."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .core import PairaugError
from .degrade import DegradeSpec
from .moa import POOL, MoaPolicy, PolicyEntry, get_preset


class ConfigError(PairaugError):
    pass


@dataclass(frozen=True)
class RunConfig:
    task: str = "sr"
    scale: int = 2
    sigma: float = 30.0
    quality: int = 30
    patch_size: int = 48
    policy: str = "default"
    p: float | None = None
    weights: dict = field(default_factory=dict)
    alphas: dict = field(default_factory=dict)
    seed: int = 0
    samples_per_image: int = 1
    workers: int = 1
    input_dir: str = ""
    output_dir: str = ""

    def degrade_spec(self) -> DegradeSpec:
        return DegradeSpec(
            task=self.task, scale=self.scale, sigma=self.sigma, quality=self.quality
        )

    def moa_policy(self) -> MoaPolicy:
        base = get_preset(self.policy)
        if self.p is None and not self.weights and not self.alphas:
            return base
        entries = []
        for e in base.entries:
            w = self.weights.get(e.method, e.weight)
            a = self.alphas.get(e.method, e.alpha)
            if e.method == "cutmixup" and isinstance(a, (int, float)):
                a = (float(a), 1.2)
            entries.append(PolicyEntry(e.method, w, a))
        p = base.p if self.p is None else self.p
        return MoaPolicy(p=p, entries=tuple(entries))

    def validate(self) -> "RunConfig":
        self.degrade_spec()
        self.moa_policy()
        if self.patch_size < 1:
            raise ConfigError(f"patch_size must be >= 1, got {self.patch_size}")
        if self.samples_per_image < 1:
            raise ConfigError("samples_per_image must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self


_INT_KEYS = {"scale", "quality", "patch_size", "seed", "samples_per_image", "workers"}
_FLOAT_KEYS = {"sigma", "p"}
_STR_KEYS = {"task", "policy", "input_dir", "output_dir"}


def parse_config(text: str) -> RunConfig:
    """Parse the flat `key = value` format; '#' starts a comment."""
    values: dict = {}
    weights: dict = {}
    alphas: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key.startswith("weights."):
            method = key[len("weights."):]
            if method not in POOL:
                raise ConfigError(f"line {lineno}: unknown method {method!r}")
            weights[method] = float(val)
        elif key.startswith("alpha."):
            method = key[len("alpha."):]
            if method not in POOL:
                raise ConfigError(f"line {lineno}: unknown method {method!r}")
            parts = [float(v) for v in val.split(",")]
            alphas[method] = tuple(parts) if len(parts) > 1 else parts[0]
        elif key in _INT_KEYS:
            values[key] = int(val)
        elif key in _FLOAT_KEYS:
            values[key] = float(val)
        elif key in _STR_KEYS:
            values[key] = val
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return RunConfig(weights=weights, alphas=alphas, **values)


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for key in sorted(_STR_KEYS | _INT_KEYS | _FLOAT_KEYS):
        val = getattr(cfg, key)
        if val is None or val == "":
            continue
        lines.append(f"{key} = {val}")
    for method in sorted(cfg.weights):
        lines.append(f"weights.{method} = {cfg.weights[method]}")
    for method in sorted(cfg.alphas):
        a = cfg.alphas[method]
        val = ",".join(str(v) for v in a) if isinstance(a, tuple) else str(a)
        lines.append(f"alpha.{method} = {val}")
    return "\n".join(lines) + "\n"


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def with_overrides(cfg: RunConfig, **kwargs) -> RunConfig:
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return replace(cfg, **kwargs)
