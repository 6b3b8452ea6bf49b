"""Dataset synthesis, patch augmentation runs with manifests, evaluation, demos.

Every output is a pure function of (sources, config, global seed): each
sample derives its own seed from its index, so results are identical
across runs and worker counts, and every manifest entry can be replayed
bit-exactly against the source images.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import augment as aug
from .config import ConfigError, RunConfig
from .core import AlignedPair, AugmentedSample, AugRecord, Image, LossMask, PairaugError
from .degrade import DegradeSpec, degrade
from .metrics import evaluate, residual_map
from .moa import TWO_SAMPLE, apply_moa
from .resample import align_pair
from .rng import Rng, derive_item_seed

log = logging.getLogger("pairaug")

DESCRIPTOR_NAME = "dataset.json"
MANIFEST_NAME = "manifest.jsonl"


class DatasetError(PairaugError):
    pass


# ---------------------------------------------------------------- synth

def cmd_synth(hr_dir, out_dir, spec: DegradeSpec, seed: int) -> dict:
    """Build a degraded/clean paired dataset from a directory of clean PNGs."""
    hr_dir = Path(hr_dir)
    out_dir = Path(out_dir)
    files = sorted(hr_dir.glob("*.png"))
    if not files:
        raise DatasetError(f"no PNG images in {hr_dir}")
    (out_dir / "input").mkdir(parents=True, exist_ok=True)
    (out_dir / "target").mkdir(parents=True, exist_ok=True)
    entries = []
    for idx, path in enumerate(files):
        try:
            hr = Image.load_png(path)
        except OSError as exc:
            log.warning("skipping unreadable %s: %s", path.name, exc)
            continue
        if spec.task == "sr" and (hr.width % spec.scale or hr.height % spec.scale):
            log.warning("skipping %s: %dx%d not divisible by %d",
                        path.name, hr.width, hr.height, spec.scale)
            continue
        item_seed = derive_item_seed(seed, idx)
        rng = Rng(item_seed)
        if spec.task == "jpeg":
            from .degrade import jpeg_roundtrip
            inp, raw = jpeg_roundtrip(hr, spec.quality, return_bytes=True)
            _atomic_write_bytes(out_dir / "input" / f"{path.stem}.jpg", raw)
            tgt = hr
        else:
            inp, tgt = degrade(hr, spec, rng)
        inp.save_png(out_dir / "input" / path.name)
        tgt.save_png(out_dir / "target" / path.name)
        entries.append({"name": path.name, "item_seed": item_seed})
    descriptor = {
        "task": spec.task,
        "scale": spec.pair_scale,
        "sigma": spec.sigma,
        "quality": spec.quality,
        "seed": seed,
        "images": entries,
    }
    with open(out_dir / DESCRIPTOR_NAME, "w", encoding="utf-8") as fh:
        json.dump(descriptor, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return descriptor


# ---------------------------------------------------------------- dataset

@dataclass(frozen=True)
class PairDataset:
    """Paired dataset on disk: input/ and target/ subdirectories plus descriptor."""

    root: Path
    names: tuple
    scale: int

    @classmethod
    def open(cls, root) -> "PairDataset":
        root = Path(root)
        desc_path = root / DESCRIPTOR_NAME
        scale = 1
        if desc_path.exists():
            with open(desc_path, "r", encoding="utf-8") as fh:
                scale = int(json.load(fh).get("scale", 1))
        names = tuple(sorted(p.name for p in (root / "target").glob("*.png")))
        if not names:
            raise DatasetError(f"no paired images under {root}")
        for name in names:
            if not (root / "input" / name).exists():
                raise DatasetError(f"missing input image for {name}")
        return cls(root=root, names=names, scale=scale)

    def load(self, index: int) -> tuple[Image, Image]:
        name = self.names[index]
        return (
            _cached_png(str(self.root / "input" / name)),
            _cached_png(str(self.root / "target" / name)),
        )


@lru_cache(maxsize=64)
def _cached_png(path: str) -> Image:
    return Image.load_png(path)


# ---------------------------------------------------------------- augment

@dataclass(frozen=True)
class ManifestEntry:
    index: int
    source_id: str
    patch_x: int
    patch_y: int
    flip_k: int
    item_seed: int
    record: AugRecord
    partner_id: str = ""
    partner_x: int = 0
    partner_y: int = 0
    files: dict | None = None

    def to_dict(self) -> dict:
        d = {
            "index": self.index,
            "source_id": self.source_id,
            "patch_x": self.patch_x,
            "patch_y": self.patch_y,
            "flip_k": self.flip_k,
            "item_seed": self.item_seed,
            "record": self.record.to_dict(),
            "files": self.files or {},
        }
        if self.partner_id:
            d["partner_id"] = self.partner_id
            d["partner_x"] = self.partner_x
            d["partner_y"] = self.partner_y
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ManifestEntry":
        return cls(
            index=d["index"], source_id=d["source_id"],
            patch_x=d["patch_x"], patch_y=d["patch_y"], flip_k=d["flip_k"],
            item_seed=d["item_seed"], record=AugRecord.from_dict(d["record"]),
            partner_id=d.get("partner_id", ""), partner_x=d.get("partner_x", 0),
            partner_y=d.get("partner_y", 0), files=d.get("files"),
        )


def _extract_pair(dataset: PairDataset, img_idx: int, x: int, y: int,
                  patch_size: int) -> AlignedPair:
    """Crop a (patch, s*patch) pair at LR-grid coordinates and align it."""
    inp, tgt = dataset.load(img_idx)
    s = dataset.scale
    lr_patch = Image(inp.data[y:y + patch_size, x:x + patch_size])
    hr_patch = Image(
        tgt.data[s * y:s * (y + patch_size), s * x:s * (x + patch_size)]
    )
    return align_pair(lr_patch, hr_patch, s, source_id=dataset.names[img_idx])


def _sample_patch_coords(dataset: PairDataset, patch_size: int, rng: Rng):
    img_idx = rng.randrange(len(dataset.names))
    inp, _ = dataset.load(img_idx)
    max_x = inp.width - patch_size
    max_y = inp.height - patch_size
    if max_x < 0 or max_y < 0:
        raise ConfigError(
            f"patch_size {patch_size} exceeds image {inp.width}x{inp.height}"
        )
    return img_idx, rng.randrange(max_x + 1), rng.randrange(max_y + 1)


def _produce_item(dataset: PairDataset, cfg: RunConfig, index: int):
    """One augmented sample. Draw order: image, patch x, patch y, flip,
    MoA selection, partner image/x/y (two-sample methods), method draws."""
    item_seed = derive_item_seed(cfg.seed, index)
    rng = Rng(item_seed)
    img_idx, x, y = _sample_patch_coords(dataset, cfg.patch_size, rng)
    pair = _extract_pair(dataset, img_idx, x, y, cfg.patch_size)
    flip_k = rng.randrange(8)
    pair = aug.apply_dihedral_pair(pair, flip_k)

    partner_info = {}

    def provider() -> AlignedPair:
        p_idx, px, py = _sample_patch_coords(dataset, cfg.patch_size, rng)
        partner_info.update(idx=p_idx, x=px, y=py)
        return _extract_pair(dataset, p_idx, px, py, cfg.patch_size)

    sample = apply_moa(pair, provider, cfg.moa_policy(), rng, item_seed)
    entry = ManifestEntry(
        index=index,
        source_id=dataset.names[img_idx],
        patch_x=x, patch_y=y, flip_k=flip_k, item_seed=item_seed,
        record=sample.record,
        partner_id=dataset.names[partner_info["idx"]] if partner_info else "",
        partner_x=partner_info.get("x", 0),
        partner_y=partner_info.get("y", 0),
        files={
            "input": f"input/{index:06d}.png",
            "target": f"target/{index:06d}.png",
            "mask": f"mask/{index:06d}.png",
        },
    )
    return sample, entry


_WORKER_STATE: dict = {}


def _worker_init(dataset_root: str, cfg: RunConfig, out_dir: str) -> None:
    _WORKER_STATE["dataset"] = PairDataset.open(dataset_root)
    _WORKER_STATE["cfg"] = cfg
    _WORKER_STATE["out"] = Path(out_dir)


def _worker_task(index: int) -> dict:
    sample, entry = _produce_item(_WORKER_STATE["dataset"], _WORKER_STATE["cfg"], index)
    _write_sample(_WORKER_STATE["out"], sample, entry)
    return entry.to_dict()


def _write_sample(out_dir: Path, sample: AugmentedSample, entry: ManifestEntry) -> None:
    for key, img in (("input", sample.input), ("target", sample.target)):
        path = out_dir / entry.files[key]
        tmp = path.with_suffix(".tmp.png")
        img.save_png(tmp)
        os.replace(tmp, path)
    mask_path = out_dir / entry.files["mask"]
    tmp = mask_path.with_suffix(".tmp.png")
    sample.loss_mask.save_png(tmp)
    os.replace(tmp, mask_path)


def cmd_augment(cfg: RunConfig) -> list[dict]:
    """Run a patch-augmentation pass; returns the manifest entries."""
    cfg.validate()
    if not cfg.input_dir or not cfg.output_dir:
        raise ConfigError("input_dir and output_dir are required")
    dataset = PairDataset.open(cfg.input_dir)
    sample_w, _ = dataset.load(0)
    if cfg.patch_size > min(sample_w.width, sample_w.height):
        raise ConfigError("patch_size exceeds the smallest image dimension")
    out_dir = Path(cfg.output_dir)
    for sub in ("input", "target", "mask"):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)
    n_items = cfg.samples_per_image * len(dataset.names)
    indices = range(n_items)
    if cfg.workers > 1:
        with multiprocessing.Pool(
            cfg.workers, initializer=_worker_init,
            initargs=(str(cfg.input_dir), cfg, str(out_dir)),
        ) as pool:
            entries = list(pool.map(_worker_task, indices))
    else:
        _worker_init(str(cfg.input_dir), cfg, str(out_dir))
        entries = [_worker_task(i) for i in indices]
    entries.sort(key=lambda e: e["index"])
    manifest_path = out_dir / MANIFEST_NAME
    tmp = manifest_path.with_suffix(".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(json.dumps(e, sort_keys=True) + "\n")
    os.replace(tmp, manifest_path)
    return entries


def replay_entry(entry: ManifestEntry, dataset: PairDataset,
                 patch_size: int) -> AugmentedSample:
    """Rebuild one manifest entry's sample from the source images."""
    name_to_idx = {n: i for i, n in enumerate(dataset.names)}
    pair = _extract_pair(dataset, name_to_idx[entry.source_id],
                         entry.patch_x, entry.patch_y, patch_size)
    pair = aug.apply_dihedral_pair(pair, entry.flip_k)
    partner = None
    if entry.record.method in TWO_SAMPLE:
        partner = _extract_pair(dataset, name_to_idx[entry.partner_id],
                                entry.partner_x, entry.partner_y, patch_size)
    return aug.replay(entry.record, pair, partner)


def load_manifest(path) -> list[ManifestEntry]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(ManifestEntry.from_dict(json.loads(line)))
    return entries


def verify_manifest(out_dir, dataset_dir, patch_size: int) -> int:
    """Replay every manifest entry and compare against the stored patches.

    Returns the number of verified entries; raises on any mismatch.
    """
    out_dir = Path(out_dir)
    dataset = PairDataset.open(dataset_dir)
    entries = load_manifest(out_dir / MANIFEST_NAME)
    for entry in entries:
        sample = replay_entry(entry, dataset, patch_size)
        for key, img in (("input", sample.input), ("target", sample.target)):
            stored = Image.load_png(out_dir / entry.files[key])
            got = np.rint(img.data * 255.0).astype(np.uint8)
            want = np.rint(stored.data * 255.0).astype(np.uint8)
            if not np.array_equal(got, want):
                raise PairaugError(
                    f"replay mismatch for entry {entry.index} ({key})"
                )
        stored_mask = LossMask.load_png(out_dir / entry.files["mask"])
        if not np.array_equal(stored_mask.valid, sample.loss_mask.valid):
            raise PairaugError(f"replay mask mismatch for entry {entry.index}")
    return len(entries)


# ---------------------------------------------------------------- eval

def cmd_eval(dir_a, dir_b, channel_mode: str = "y_only") -> dict:
    """Per-image and mean PSNR/SSIM between two directories of same-named PNGs."""
    dir_a, dir_b = Path(dir_a), Path(dir_b)
    names_a = {p.name for p in dir_a.glob("*.png")}
    names_b = {p.name for p in dir_b.glob("*.png")}
    if names_a != names_b:
        only_a = sorted(names_a - names_b)
        only_b = sorted(names_b - names_a)
        raise DatasetError(
            f"file name mismatch; only in {dir_a}: {only_a}; only in {dir_b}: {only_b}"
        )
    if not names_a:
        raise DatasetError("no PNG files to evaluate")
    per_image = {}
    for name in sorted(names_a):
        a = Image.load_png(dir_a / name)
        b = Image.load_png(dir_b / name)
        per_image[name] = evaluate(a, b, channel_mode)
    finite = [r.psnr_db for r in per_image.values() if np.isfinite(r.psnr_db)]
    mean_psnr = float(np.mean(finite)) if finite else float("inf")
    mean_ssim = float(np.mean([r.ssim for r in per_image.values()]))
    return {
        "channel_mode": channel_mode,
        "per_image": {k: v.to_dict() for k, v in per_image.items()},
        "mean": {"psnr_db": mean_psnr, "ssim": mean_ssim},
    }


# ---------------------------------------------------------------- demo

def cmd_demo(pair: AlignedPair, method: str, seed: int, out_path) -> AugmentedSample:
    """Write a side-by-side panel: target | aligned input | augmented | residual."""
    rng = Rng(seed)
    if method == "none":
        sample = aug.passthrough(pair, seed)
    elif method == "flip_rotate":
        sample = aug.flip_rotate(pair, rng, seed)
    else:
        from .moa import MoaPolicy, PolicyEntry

        policy = MoaPolicy(p=1.0, entries=(PolicyEntry(method),))
        # partner for two-sample methods: the same pair rotated a half turn
        sample = apply_moa(
            pair, lambda: aug.apply_dihedral_pair(pair, 2), policy, rng, seed
        )
    resid = residual_map(sample.input, pair.target)
    tiles = [pair.target, pair.input, sample.input, resid]
    h = pair.target.height
    sep = np.ones((h, 2, 3), dtype=np.float32)
    strips = []
    for tile in tiles:
        data = tile.data
        if data.shape[2] == 1:
            data = np.repeat(data, 3, axis=2)
        strips.extend([data, sep])
    panel = Image(np.concatenate(strips[:-1], axis=1))
    panel.save_png(out_path)
    return sample


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
