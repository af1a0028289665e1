"""Bit-exact PGM serialization, PNG previews, and the comparison report.

PGM (NetPBM P2/P5, maxval 255) is the archival format: trivially
bit-exact in any language. PNG output exists only so browsers can render
previews; the encoder below writes a minimal fixed-layout grayscale PNG,
which keeps responses byte-deterministic. Decoding of uploaded PNGs is
delegated to Pillow.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import dataclass
from io import BytesIO

import numpy as np

from .image import GRAY_MAX, BinaryImage, GrayImage, rgb_to_gray


class FormatError(ValueError):
    """Base class for serialization failures."""


class UnsupportedFormatError(FormatError):
    """Magic number is not a format this toolkit reads."""


class UnsupportedDepthError(FormatError):
    """Sample depth other than 8-bit (maxval 255)."""


class CorruptStreamError(FormatError):
    """Header or pixel data is malformed or truncated."""


@dataclass(frozen=True)
class ReportEntry:
    """One (image, method) row of a comparison report."""

    image_id: str
    method: str
    t: int
    criterion: float | None
    foreground_fraction: float
    elapsed_micros: int

    def __post_init__(self):
        if not 0.0 <= self.foreground_fraction <= 1.0:
            raise ValueError(
                f"foreground_fraction {self.foreground_fraction} outside [0, 1]"
            )
        if self.elapsed_micros < 0:
            raise ValueError("elapsed_micros must be nonnegative")


# ---------------------------------------------------------------------------
# PGM
# ---------------------------------------------------------------------------


def read_pgm(data: bytes) -> GrayImage:
    """Parse a NetPBM P2 (ASCII) or P5 (binary) stream with maxval 255.

    '#' comments and arbitrary whitespace runs are tolerated throughout
    the header. Trailing bytes after the pixel data are ignored.
    """
    if len(data) < 2 or data[:1] != b"P":
        raise UnsupportedFormatError("not a NetPBM stream")
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormatError(f"unsupported magic {magic!r}; expected P2 or P5")

    pos = 2
    header = []
    while len(header) < 3:
        token, pos = _next_token(data, pos)
        header.append(token)
    width, height, maxval = (_header_int(tok) for tok in header)
    if maxval != 255:
        raise UnsupportedDepthError(f"only maxval 255 is supported, got {maxval}")
    if width < 1 or height < 1:
        raise CorruptStreamError(f"nonpositive dimensions {width}x{height}")
    n = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates the header from raw data
        pixel_bytes = data[pos + 1 : pos + 1 + n]
        if len(pixel_bytes) < n:
            raise CorruptStreamError(f"expected {n} pixel bytes, found {len(pixel_bytes)}")
        pixels = np.frombuffer(pixel_bytes, dtype=np.uint8)
    else:
        values = []
        while len(values) < n:
            token, pos = _next_token(data, pos, eof_ok=True)
            if token is None:
                raise CorruptStreamError(f"expected {n} pixel values, found {len(values)}")
            values.append(_header_int(token))
        if any(v < 0 or v > GRAY_MAX for v in values):
            raise CorruptStreamError("pixel value outside [0, maxval]")
        pixels = np.array(values, dtype=np.uint8)
    return GrayImage(width, height, pixels)


def _next_token(data: bytes, pos: int, eof_ok: bool = False):
    """Return the next whitespace-delimited token, skipping '#' comments."""
    while pos < len(data):
        byte = data[pos : pos + 1]
        if byte == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif byte.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
                pos += 1
            return data[start:pos], pos
    if eof_ok:
        return None, pos
    raise CorruptStreamError("truncated header")


def _header_int(token: bytes) -> int:
    try:
        return int(token)
    except ValueError:
        raise CorruptStreamError(f"expected an integer, got {token!r}") from None


def write_pgm(img: GrayImage | BinaryImage, ascii: bool = False) -> bytes:
    """Serialize to P5 (default) or P2. Binary masks expand 0/1 -> 0/255."""
    pixels = _display_pixels(img)
    magic = b"P2" if ascii else b"P5"
    header = magic + b"\n%d %d\n255\n" % (img.width, img.height)
    if not ascii:
        return header + pixels.tobytes()
    lines = []
    # 17 three-digit values per line keeps rows within NetPBM's 70-char limit
    flat = pixels.tolist()
    for i in range(0, len(flat), 17):
        lines.append(" ".join(str(v) for v in flat[i : i + 17]))
    return header + ("\n".join(lines) + "\n").encode("ascii")


def _display_pixels(img: GrayImage | BinaryImage) -> np.ndarray:
    if isinstance(img, BinaryImage):
        return (img.mask * np.uint8(255)).astype(np.uint8)
    return img.pixels


# ---------------------------------------------------------------------------
# PNG
# ---------------------------------------------------------------------------


def encode_png_preview(img: GrayImage | BinaryImage) -> bytes:
    """Encode as a minimal 8-bit grayscale PNG (non-interlaced, filter 0).

    Output is deterministic for a given image, so HTTP previews of the
    same (image, threshold) pair are byte-identical.
    """
    pixels = _display_pixels(img).reshape(img.height, img.width)
    raw = b"".join(b"\x00" + row.tobytes() for row in pixels)
    ihdr = struct.pack(">IIBBBBB", img.width, img.height, 8, 0, 0, 0, 0)
    return b"".join(
        [
            b"\x89PNG\r\n\x1a\n",
            _png_chunk(b"IHDR", ihdr),
            _png_chunk(b"IDAT", zlib.compress(raw, 9)),
            _png_chunk(b"IEND", b""),
        ]
    )


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def read_image_bytes(data: bytes) -> GrayImage:
    """Decode PGM or PNG upload bytes into a GrayImage.

    Color PNGs are converted through rgb_to_gray; 16-bit or paletted
    depths beyond 8-bit gray are rejected.
    """
    if data[:2] in (b"P2", b"P5"):
        return read_pgm(data)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        return _read_png(data)
    raise UnsupportedFormatError("expected PGM (P2/P5) or PNG bytes")


def _read_png(data: bytes) -> GrayImage:
    from PIL import Image, UnidentifiedImageError

    try:
        im = Image.open(BytesIO(data))
        im.load()
    except UnidentifiedImageError as exc:
        raise CorruptStreamError("undecodable PNG stream") from exc
    except OSError as exc:
        raise CorruptStreamError(f"undecodable PNG stream: {exc}") from exc
    if im.mode == "L":
        arr = np.asarray(im, dtype=np.uint8)
        return GrayImage.from_2d(arr)
    if im.mode in ("1", "LA", "P", "RGB", "RGBA"):
        rgb = np.asarray(im.convert("RGB"), dtype=np.uint8)
        h, w, _ = rgb.shape
        return rgb_to_gray(
            rgb[:, :, 0].ravel(), rgb[:, :, 1].ravel(), rgb[:, :, 2].ravel(), w, h
        )
    raise UnsupportedDepthError(f"unsupported PNG mode {im.mode!r}")


# ---------------------------------------------------------------------------
# report JSON
# ---------------------------------------------------------------------------


def entry_to_dict(entry: ReportEntry) -> dict:
    """ReportEntry as a JSON-ready dict, numbers capped at 6 fractional digits."""
    return {
        "image_id": entry.image_id,
        "method": entry.method,
        "t": int(entry.t),
        "criterion": None if entry.criterion is None else round(float(entry.criterion), 6),
        "foreground_fraction": round(float(entry.foreground_fraction), 6),
        "elapsed_micros": int(entry.elapsed_micros),
    }


def write_report(entries: list[ReportEntry]) -> bytes:
    """UTF-8 JSON array of report entries, in input order."""
    return json.dumps([entry_to_dict(e) for e in entries], indent=2).encode("utf-8")
