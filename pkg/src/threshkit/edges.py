"""Kirsch compass edge detection and the edge-guided threshold selector.

The edge-guided method (EMT) restricts threshold selection to the pixels
sitting on the strongest edges: it keeps the top slice of Kirsch
magnitudes, histograms the gray values underneath, and minimizes the
within-group variance on that reduced histogram. Segmentation therefore
starts from the most contrasted boundaries instead of the full image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GRAY_LEVELS, GrayImage, Histogram
from .methods import ThresholdResult, hdt_threshold

# Largest possible compass response: three 5-coefficients over value-255
# neighbors while the five -3 neighbors are zero, i.e. 5 * 3 * 255.
MAX_MAGNITUDE = 3825


class NoEdgesError(ValueError):
    """Raised when an image has no strictly positive edge response."""


@dataclass(frozen=True, eq=False)
class EdgeMap:
    """Per-pixel compass edge magnitude, row-major like the source image."""

    width: int
    height: int
    magnitudes: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.magnitudes)
        if raw.size != self.width * self.height:
            raise ValueError(
                f"magnitude count {raw.size} does not match {self.width}x{self.height}"
            )
        if raw.size and raw.min() < 0:
            raise ValueError("edge magnitudes must be nonnegative")
        arr = np.array(raw, dtype=np.int64).ravel()
        arr.setflags(write=False)
        object.__setattr__(self, "magnitudes", arr)

    def to_2d(self) -> np.ndarray:
        return self.magnitudes.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, EdgeMap):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.magnitudes, other.magnitudes)
        )


def kirsch_edges(img: GrayImage) -> EdgeMap:
    """Maximum response over the eight 3x3 compass kernels, clamped at 0.

    The east kernel is [[-3,-3,5],[-3,0,5],[-3,-3,5]]; the other seven are
    its 45-degree rotations. Borders use replicate padding so a constant
    image (or a 1x1 one) responds zero everywhere. With coefficients
    {three 5s, five -3s} summing to zero, every response equals
    8 * (sum of the three 5-neighbors) - 3 * (sum of all eight neighbors),
    which is how the scan below stays integer-exact and cheap.
    """
    padded = np.pad(img.to_2d().astype(np.int64), 1, mode="edge")
    # ring neighbors, clockwise: NW N NE E SE S SW W
    ring = [
        padded[:-2, :-2],
        padded[:-2, 1:-1],
        padded[:-2, 2:],
        padded[1:-1, 2:],
        padded[2:, 2:],
        padded[2:, 1:-1],
        padded[2:, :-2],
        padded[1:-1, :-2],
    ]
    ring_sum = np.zeros_like(ring[0])
    for nb in ring:
        ring_sum = ring_sum + nb
    best = None
    for k in range(8):
        triple = ring[k] + ring[(k + 1) % 8] + ring[(k + 2) % 8]
        response = 8 * triple - 3 * ring_sum
        best = response if best is None else np.maximum(best, response)
    magnitudes = np.maximum(best, 0)
    return EdgeMap(img.width, img.height, magnitudes.ravel())


def emt_threshold(img: GrayImage, edge_percentile: float = 0.9) -> ThresholdResult:
    """Threshold the gray values found under the strongest edges.

    Keeps pixels whose Kirsch magnitude reaches the nearest-rank
    edge_percentile quantile of the strictly positive magnitudes, builds a
    histogram of their gray values, and minimizes within-group variance on
    it. The criterion reports how many edge pixels were kept.

    Raises NoEdgesError when no magnitude is positive (constant image).
    """
    if not 0.0 < edge_percentile < 1.0:
        raise ValueError(f"edge_percentile must lie in (0, 1), got {edge_percentile}")
    edges = kirsch_edges(img)
    positive = np.sort(edges.magnitudes[edges.magnitudes > 0])
    if positive.size == 0:
        raise NoEdgesError("image has no edges to guide the threshold")
    rank = min(max(math.ceil(edge_percentile * positive.size), 1), positive.size)
    cutoff = int(positive[rank - 1])
    selected = edges.magnitudes >= cutoff
    counts = np.bincount(img.pixels[selected], minlength=GRAY_LEVELS).astype(np.int64)
    edge_hist = Histogram(counts, int(selected.sum()))
    picked = hdt_threshold(edge_hist)
    return ThresholdResult(
        "emt",
        picked.t,
        criterion=float(edge_hist.total),
        params={"edge_percentile": edge_percentile},
    )
