"""Generate a small set of synthetic grayscale scenes for experiments.

Writes PGMs into demo/ (created if missing). Scenes are seeded, so the
files are identical across runs.
"""

import argparse
from pathlib import Path

import numpy as np

from threshkit import GrayImage, write_pgm


def bright_disc(side, rng):
    """Dark background, bright circular object, mild sensor noise."""
    yy, xx = np.mgrid[0:side, 0:side]
    r = side * 0.28
    disc = (xx - side / 2) ** 2 + (yy - side / 2) ** 2 <= r * r
    img = np.where(disc, 190.0, 55.0)
    img += rng.normal(0, 12, img.shape)
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def lit_gradient_bars(side, rng):
    """Vertical bars under a horizontal illumination ramp; hard for one global t."""
    ramp = np.linspace(20, 120, side)[None, :]
    bars = (np.arange(side)[None, :] // (side // 8)) % 2 * 90.0
    img = ramp + bars + rng.normal(0, 6, (side, side))
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


def three_region_mosaic(side, rng):
    """Three gray populations in blocks; a clean multi-modal histogram."""
    img = np.full((side, side), 30.0)
    img[:, side // 3: 2 * side // 3] = 128.0
    img[:, 2 * side // 3:] = 225.0
    img += rng.normal(0, 8, img.shape)
    return np.clip(np.round(img), 0, 255).astype(np.uint8)


SCENES = {
    "disc": bright_disc,
    "bars": lit_gradient_bars,
    "mosaic": three_region_mosaic,
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--output", type=Path, default=Path("demo"))
    parser.add_argument("--side", type=int, default=128)
    parser.add_argument("--seed", type=int, default=2026)
    args = parser.parse_args()

    args.output.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for name, build in SCENES.items():
        grid = build(args.side, rng)
        path = args.output / f"{name}.pgm"
        path.write_bytes(write_pgm(GrayImage.from_2d(grid)))
        print(f"wrote {path} ({args.side}x{args.side})")


if __name__ == "__main__":
    main()
