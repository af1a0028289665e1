"""Raster and histogram domain types plus pixelwise binarization.

Images are 8-bit single-channel rasters stored row-major. All types are
immutable after construction and all operations are pure, so everything
here is safe to call from concurrent code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GRAY_LEVELS = 256
GRAY_MAX = GRAY_LEVELS - 1


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale raster; ``pixels`` is row-major, top-left first."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be >= 1, got {self.width}x{self.height}")
        raw = np.asarray(self.pixels)
        if raw.size != self.width * self.height:
            raise ValueError(
                f"pixel count {raw.size} does not match {self.width}x{self.height}"
            )
        if raw.size and (raw.min() < 0 or raw.max() > GRAY_MAX):
            raise ValueError("pixel values must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen_array(raw, np.uint8))

    def to_2d(self) -> np.ndarray:
        """Read-only (height, width) view of the pixel data."""
        return self.pixels.reshape(self.height, self.width)

    @classmethod
    def from_2d(cls, arr) -> "GrayImage":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        return cls(arr.shape[1], arr.shape[0], arr.ravel())

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.pixels, other.pixels)
        )


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Segmentation mask; 1 marks object pixels, 0 background."""

    width: int
    height: int
    mask: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be >= 1, got {self.width}x{self.height}")
        raw = np.asarray(self.mask)
        if raw.size != self.width * self.height:
            raise ValueError(f"mask length {raw.size} does not match {self.width}x{self.height}")
        if raw.size and not np.isin(raw, (0, 1)).all():
            raise ValueError("mask labels must be 0 or 1")
        object.__setattr__(self, "mask", _frozen_array(raw, np.uint8))

    def to_2d(self) -> np.ndarray:
        return self.mask.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.mask, other.mask)
        )


@dataclass(frozen=True, eq=False)
class Histogram:
    """256-bin gray-level counts; ``total`` equals the source pixel count."""

    counts: np.ndarray
    total: int

    def __post_init__(self):
        raw = np.asarray(self.counts)
        if raw.size != GRAY_LEVELS:
            raise ValueError(f"histogram needs {GRAY_LEVELS} bins, got {raw.size}")
        if raw.size and raw.min() < 0:
            raise ValueError("histogram counts must be nonnegative")
        if int(raw.sum()) != self.total:
            raise ValueError(f"counts sum to {int(raw.sum())}, expected total {self.total}")
        object.__setattr__(self, "counts", _frozen_array(raw, np.int64))
        object.__setattr__(self, "total", int(self.total))

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.total == other.total and np.array_equal(self.counts, other.counts)


def compute_histogram(img: GrayImage) -> Histogram:
    """Count pixels per gray level."""
    counts = np.bincount(img.pixels, minlength=GRAY_LEVELS).astype(np.int64)
    return Histogram(counts, img.width * img.height)


def apply_threshold(img: GrayImage, t: int) -> BinaryImage:
    """Binarize: label 1 where pixel > t, 0 where pixel <= t.

    The boundary is strict; a pixel equal to t is background.
    """
    t = _check_level(t)
    mask = (img.pixels > t).astype(np.uint8)
    return BinaryImage(img.width, img.height, mask)


def foreground_fraction(bin_img: BinaryImage) -> float:
    """Fraction of pixels labeled 1."""
    return int(bin_img.mask.sum()) / (bin_img.width * bin_img.height)


def pixel_disagreement(a: BinaryImage, b: BinaryImage) -> float:
    """Fraction of positions where two masks differ.

    Raises ValueError when dimensions do not match.
    """
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    return int(np.count_nonzero(a.mask != b.mask)) / (a.width * a.height)


def rgb_to_gray(r, g, b, width: int, height: int) -> GrayImage:
    """Convert per-pixel RGB channels to gray.

    Uses the 0.299/0.587/0.114 luma weights with round-half-up, clamped
    to [0, 255]. Channel sequences are row-major, one value per pixel.
    """
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    luma = 0.299 * r + 0.587 * g + 0.114 * b
    gray = np.clip(np.floor(luma + 0.5), 0, GRAY_MAX).astype(np.uint8)
    return GrayImage(width, height, gray)


def _check_level(t) -> int:
    if not float(t).is_integer():
        raise ValueError(f"gray level must be an integer, got {t!r}")
    t = int(t)
    if not 0 <= t <= GRAY_MAX:
        raise ValueError(f"gray level must lie in [0, 255], got {t}")
    return t
