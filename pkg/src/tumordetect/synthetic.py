"""Synthetic stand-ins for MRI slices: noise backgrounds, optionally with a bright blob."""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from .dataset import GrayImage


def blob_image(rng: np.random.Generator, side: int = 300, tumor: bool = True,
               noise: float = 20.0, background: float = 60.0, amplitude: float = 150.0,
               sigma_frac: float = 0.12, jitter_frac: float = 0.1) -> GrayImage:
    """Gaussian noise around ``background``; tumor images add a Gaussian blob near the center."""
    img = background + noise * rng.standard_normal((side, side))
    if tumor:
        yy, xx = np.mgrid[0:side, 0:side].astype(np.float64)
        cy, cx = (side - 1) / 2 + rng.uniform(-jitter_frac, jitter_frac, size=2) * side
        sigma = sigma_frac * side
        img += amplitude * np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / (2 * sigma ** 2))
    return GrayImage(np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8))


def write_blob_dataset(root: str | Path, n_tumor: int, n_healthy: int, side: int = 300,
                       seed: int = 0, **kwargs) -> tuple[Path, Path]:
    """Write PNGs into ``root/yes`` and ``root/no``; returns those two directories."""
    root = Path(root)
    yes, no = root / "yes", root / "no"
    yes.mkdir(parents=True, exist_ok=True)
    no.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(n_tumor):
        Image.fromarray(blob_image(rng, side, True, **kwargs).pixels).save(yes / f"y{i:04d}.png")
    for i in range(n_healthy):
        Image.fromarray(blob_image(rng, side, False, **kwargs).pixels).save(no / f"n{i:04d}.png")
    return yes, no
