"""Single entry point that maps a method name to its selector.

The CLI and the HTTP service both route through select_threshold, so a
given image and parameter set can only ever produce one answer.
"""

from __future__ import annotations

from .edges import emt_threshold
from .image import GrayImage, compute_histogram
from .methods import (
    ThresholdResult,
    hdt_threshold,
    manual_threshold,
    mean_threshold,
    ptile_threshold,
)

DEFAULT_P = 0.5
DEFAULT_EDGE_PERCENTILE = 0.9


def select_threshold(
    img: GrayImage,
    method: str,
    p: float = DEFAULT_P,
    t: int | None = None,
    edge_percentile: float = DEFAULT_EDGE_PERCENTILE,
) -> ThresholdResult:
    """Run one threshold selector on an image.

    ``p`` applies to ptile, ``edge_percentile`` to emt, ``t`` is required
    for manual. Unknown methods raise ValueError.
    """
    if method == "emt":
        return emt_threshold(img, edge_percentile)
    hist = compute_histogram(img)
    if method == "mean":
        return mean_threshold(hist)
    if method == "ptile":
        return ptile_threshold(hist, p)
    if method == "hdt":
        return hdt_threshold(hist)
    if method == "manual":
        if t is None:
            raise ValueError("manual method requires a threshold value")
        return manual_threshold(hist, t)
    raise ValueError(f"unknown method {method!r}")
