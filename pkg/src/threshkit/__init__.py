"""Global image thresholding toolkit.

Five ways to pick a single threshold for an 8-bit grayscale image (mean,
p-tile, within-group-variance minimization, edge-guided, manual), plus
binarization, PGM/PNG serialization, a batch CLI and an HTTP service.
"""

from .dispatch import DEFAULT_EDGE_PERCENTILE, DEFAULT_P, select_threshold
from .edges import MAX_MAGNITUDE, EdgeMap, NoEdgesError, emt_threshold, kirsch_edges
from .formats import (
    CorruptStreamError,
    FormatError,
    ReportEntry,
    UnsupportedDepthError,
    UnsupportedFormatError,
    encode_png_preview,
    read_image_bytes,
    read_pgm,
    write_pgm,
    write_report,
)
from .image import (
    GRAY_LEVELS,
    GRAY_MAX,
    BinaryImage,
    GrayImage,
    Histogram,
    apply_threshold,
    compute_histogram,
    foreground_fraction,
    pixel_disagreement,
    rgb_to_gray,
)
from .methods import (
    METHODS,
    EmptyHistogramError,
    GroupStats,
    ThresholdResult,
    hdt_threshold,
    manual_threshold,
    mean_threshold,
    ptile_threshold,
    within_group_variance,
)

__version__ = "0.1.0"

__all__ = [
    "GRAY_LEVELS",
    "GRAY_MAX",
    "MAX_MAGNITUDE",
    "METHODS",
    "DEFAULT_P",
    "DEFAULT_EDGE_PERCENTILE",
    "GrayImage",
    "BinaryImage",
    "Histogram",
    "EdgeMap",
    "GroupStats",
    "ThresholdResult",
    "ReportEntry",
    "EmptyHistogramError",
    "NoEdgesError",
    "FormatError",
    "UnsupportedFormatError",
    "UnsupportedDepthError",
    "CorruptStreamError",
    "compute_histogram",
    "apply_threshold",
    "foreground_fraction",
    "pixel_disagreement",
    "rgb_to_gray",
    "mean_threshold",
    "ptile_threshold",
    "within_group_variance",
    "hdt_threshold",
    "manual_threshold",
    "kirsch_edges",
    "emt_threshold",
    "select_threshold",
    "read_pgm",
    "write_pgm",
    "encode_png_preview",
    "read_image_bytes",
    "write_report",
]
