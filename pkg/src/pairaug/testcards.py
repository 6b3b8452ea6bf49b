"""Deterministic synthetic test images.

Natural-ish cards (smooth gradients plus band-limited texture) used by the
test suite, the demo command, and anyone who needs reproducible inputs
without shipping photographs.
"""

from __future__ import annotations

import numpy as np

from .core import Image
from .rng import bulk_uniforms


def gradient_card(width: int = 480, height: int = 320) -> Image:
    """Smooth two-axis color gradient."""
    xs = np.linspace(0.0, 1.0, width)[None, :]
    ys = np.linspace(0.0, 1.0, height)[:, None]
    r = xs * np.ones_like(ys)
    g = ys * np.ones_like(xs)
    b = 0.5 + 0.5 * np.sin(2.0 * np.pi * (xs + ys) / 2.0) * 0.8
    return Image(np.stack(np.broadcast_arrays(r, g, b), axis=2))


def texture_card(width: int = 480, height: int = 320, seed: int = 0) -> Image:
    """Smoothed random texture over a gradient base; roughly photographic statistics."""
    base = gradient_card(width, height).data.astype(np.float64)
    noise = bulk_uniforms(seed, height * width * 3).reshape(height, width, 3) - 0.5
    # separable box smoothing tames the spectrum without scipy
    k = np.ones(7) / 7.0
    for axis in (0, 1):
        noise = np.apply_along_axis(
            lambda m: np.convolve(m, k, mode="same"), axis, noise
        )
    # mostly-shared (luma-like) detail; photographs carry little chroma noise
    luma = noise.mean(axis=2, keepdims=True)
    out = base * 0.7 + 0.5 * 0.3 + luma * 1.6 + (noise - luma) * 0.3
    return Image(np.clip(out, 0.0, 1.0).astype(np.float32))


def checker_card(width: int = 480, height: int = 320, cell: int = 16) -> Image:
    ys, xs = np.mgrid[0:height, 0:width]
    checks = ((ys // cell + xs // cell) % 2).astype(np.float64)
    rgb = np.stack([checks * 0.8 + 0.1, 1.0 - checks * 0.7, np.full_like(checks, 0.5)],
                   axis=2)
    return Image(rgb)


def card_set(count: int = 8, width: int = 480, height: int = 320) -> list[Image]:
    """Deterministic set of natural-statistics cards.

    Hard synthetic edges (checker_card) are excluded: block codecs do not
    degrade monotonically with quality on such adversarial content.
    """
    cards = []
    for i in range(count):
        if i == 0:
            cards.append(gradient_card(width, height))
        else:
            cards.append(texture_card(width, height, seed=1000 + i))
    return cards
