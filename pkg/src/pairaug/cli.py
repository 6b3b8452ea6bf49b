"""Command-line interface: synth, augment, eval, demo."""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from .config import RunConfig, load_config, with_overrides
from .core import Image, PairaugError
from .degrade import DegradeSpec
from .pipeline import cmd_augment, cmd_demo, cmd_eval, cmd_synth
from .resample import align_pair
from .degrade import make_sr_pair
from .testcards import texture_card


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairaug",
        description="Deterministic paired-image augmentation and evaluation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="synthesize a degraded/clean dataset")
    p_synth.add_argument("--hr-dir", required=True)
    p_synth.add_argument("--out-dir", required=True)
    p_synth.add_argument("--task", choices=["sr", "gaussian", "jpeg"], required=True)
    p_synth.add_argument("--scale", type=int, default=2)
    p_synth.add_argument("--sigma", type=float, default=30.0)
    p_synth.add_argument("--quality", type=int, default=30)
    p_synth.add_argument("--seed", type=int, default=0)

    p_aug = sub.add_parser("augment", help="augmented patch run with manifest")
    p_aug.add_argument("--config", help="flat key = value config file")
    p_aug.add_argument("--input-dir")
    p_aug.add_argument("--output-dir")
    p_aug.add_argument("--policy",
                       choices=["default", "small-model", "restoration", "realsr"])
    p_aug.add_argument("--patch-size", type=int, dest="patch_size")
    p_aug.add_argument("--samples-per-image", type=int, dest="samples_per_image")
    p_aug.add_argument("--seed", type=int)
    p_aug.add_argument("--workers", type=int)

    p_eval = sub.add_parser("eval", help="PSNR/SSIM between two directories")
    p_eval.add_argument("dir_a")
    p_eval.add_argument("dir_b")
    p_eval.add_argument("--channel-mode", choices=["y_only", "rgb"], default="y_only")
    p_eval.add_argument("--json-out", help="write the full report as JSON")

    p_demo = sub.add_parser("demo", help="augmentation panel image")
    p_demo.add_argument("--hr", help="clean PNG; a synthetic card when omitted")
    p_demo.add_argument("--scale", type=int, default=2)
    p_demo.add_argument("--method", required=True,
                        choices=["none", "flip_rotate", "cutout", "cutmix", "mixup",
                                 "cutmixup", "rgb_permute", "blend", "cutblur"])
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--out", required=True)
    return parser


def _run_synth(args) -> int:
    spec = DegradeSpec(task=args.task, scale=args.scale, sigma=args.sigma,
                       quality=args.quality)
    desc = cmd_synth(args.hr_dir, args.out_dir, spec, args.seed)
    print(f"wrote {len(desc['images'])} pairs to {args.out_dir}")
    return 0


def _run_augment(args) -> int:
    cfg = load_config(args.config) if args.config else RunConfig()
    cfg = with_overrides(
        cfg,
        input_dir=args.input_dir,
        output_dir=args.output_dir,
        policy=args.policy,
        patch_size=args.patch_size,
        samples_per_image=args.samples_per_image,
        seed=args.seed,
        workers=args.workers,
    )
    entries = cmd_augment(cfg)
    print(f"wrote {len(entries)} samples and manifest to {cfg.output_dir}")
    return 0


def _run_eval(args) -> int:
    report = cmd_eval(args.dir_a, args.dir_b, args.channel_mode)
    width = max(len(n) for n in report["per_image"])
    print(f"{'image'.ljust(width)}  {'PSNR (dB)':>10}  {'SSIM':>8}")
    for name, r in report["per_image"].items():
        p = r["psnr_db"]
        p_str = "inf" if p == "inf" else f"{p:.4f}"
        print(f"{name.ljust(width)}  {p_str:>10}  {r['ssim']:>8.5f}")
    mean = report["mean"]
    p_mean = mean["psnr_db"]
    p_str = "inf" if math.isinf(p_mean) else f"{p_mean:.4f}"
    print(f"{'mean'.ljust(width)}  {p_str:>10}  {mean['ssim']:>8.5f}")
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _run_demo(args) -> int:
    if args.hr:
        hr = Image.load_png(args.hr)
    else:
        hr = texture_card(256, 256, seed=7)
    s = args.scale
    if hr.width % s or hr.height % s:
        hr = Image(hr.data[: hr.height - hr.height % s, : hr.width - hr.width % s])
    lr, hr = make_sr_pair(hr, s)
    pair = align_pair(lr, hr, s, source_id=args.hr or "testcard")
    cmd_demo(pair, args.method, args.seed, args.out)
    print(f"wrote panel to {args.out}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = _build_parser().parse_args(argv)
    handlers = {
        "synth": _run_synth,
        "augment": _run_augment,
        "eval": _run_eval,
        "demo": _run_demo,
    }
    try:
        return handlers[args.command](args)
    except (PairaugError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
