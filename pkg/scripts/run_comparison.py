"""Run every threshold selector over a batch of PGMs and tabulate results.

Prints one row per (image, method): chosen t, diagnostic criterion,
foreground fraction, and pairwise mask disagreement against the mean
method as a quick spread indicator.
"""

import argparse
from pathlib import Path

from threshkit import apply_threshold, foreground_fraction, pixel_disagreement, read_pgm
from threshkit.dispatch import select_threshold
from threshkit.edges import NoEdgesError

METHODS = ("mean", "ptile", "hdt", "emt")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("inputs", nargs="*", type=Path,
                        default=sorted(Path("demo").glob("*.pgm")))
    parser.add_argument("--p", type=float, default=0.5)
    parser.add_argument("--edge-percentile", type=float, default=0.9)
    args = parser.parse_args()
    if not args.inputs:
        parser.error("no input images; run scripts/make_demo_images.py first")

    print(f"{'image':<12} {'method':<6} {'t':>4} {'criterion':>12} {'fg_frac':>8} {'vs_mean':>8}")
    for path in args.inputs:
        img = read_pgm(path.read_bytes())
        baseline = None
        for method in METHODS:
            try:
                result = select_threshold(img, method, p=args.p,
                                          edge_percentile=args.edge_percentile)
            except NoEdgesError:
                print(f"{path.stem:<12} {method:<6} {'-':>4} {'no edges':>12}")
                continue
            mask = apply_threshold(img, result.t)
            if baseline is None:
                baseline = mask
            crit = "" if result.criterion is None else f"{result.criterion:.4f}"
            print(f"{path.stem:<12} {method:<6} {result.t:>4} {crit:>12} "
                  f"{foreground_fraction(mask):>8.4f} "
                  f"{pixel_disagreement(mask, baseline):>8.4f}")


if __name__ == "__main__":
    main()
