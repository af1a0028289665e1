import json
from io import BytesIO

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from PIL import Image

from threshkit import (
    BinaryImage,
    CorruptStreamError,
    GrayImage,
    ReportEntry,
    UnsupportedDepthError,
    UnsupportedFormatError,
    encode_png_preview,
    read_image_bytes,
    read_pgm,
    write_pgm,
    write_report,
)

from conftest import gray_images


class TestReadPgm:
    def test_minimal_ascii(self):
        img = read_pgm(b"P2\n2 2\n255\n0 0 255 255")
        assert img == GrayImage(2, 2, [0, 0, 255, 255])

    def test_minimal_binary(self):
        img = read_pgm(b"P5\n2 2\n255\n\x00\x00\xff\xff")
        assert img == GrayImage(2, 2, [0, 0, 255, 255])

    def test_p2_p5_equivalence(self):
        ascii_img = read_pgm(b"P2\n3 1\n255\n7 128 9")
        binary_img = read_pgm(b"P5\n3 1\n255\n\x07\x80\x09")
        assert ascii_img == binary_img

    def test_comments_and_whitespace_runs(self):
        data = b"P2 # magic\n# a comment line\n  2\t1 # dims\n255\n# data next\n5 6"
        assert read_pgm(data) == GrayImage(2, 1, [5, 6])

    def test_rejects_high_maxval(self):
        with pytest.raises(UnsupportedDepthError):
            read_pgm(b"P2\n1 1\n65535\n0")

    def test_rejects_foreign_magic(self):
        with pytest.raises(UnsupportedFormatError):
            read_pgm(b"P6\n1 1\n255\n\x00\x00\x00")
        with pytest.raises(UnsupportedFormatError):
            read_pgm(b"BM rubbish")

    def test_rejects_truncated_binary(self):
        with pytest.raises(CorruptStreamError):
            read_pgm(b"P5\n2 2\n255\n\x00\x00")

    def test_rejects_truncated_ascii(self):
        with pytest.raises(CorruptStreamError):
            read_pgm(b"P2\n2 2\n255\n0 1 2")

    def test_rejects_truncated_header(self):
        with pytest.raises(CorruptStreamError):
            read_pgm(b"P5\n2 2\n")

    def test_rejects_zero_dimension(self):
        with pytest.raises(CorruptStreamError):
            read_pgm(b"P2\n0 2\n255\n")


class TestWritePgm:
    def test_binary_header_layout(self):
        assert write_pgm(GrayImage(1, 1, [7])) == b"P5\n1 1\n255\n\x07"

    def test_mask_expands_to_0_255(self):
        data = write_pgm(BinaryImage(2, 1, [0, 1]))
        assert data == b"P5\n2 1\n255\n\x00\xff"

    def test_ascii_mode_round_trips(self):
        img = GrayImage(5, 3, list(range(15)))
        assert read_pgm(write_pgm(img, ascii=True)) == img

    @given(gray_images())
    def test_round_trip_identity(self, img):
        assert read_pgm(write_pgm(img)) == img

    @given(gray_images())
    def test_p5_idempotent_bytes(self, img):
        first = write_pgm(img)
        assert write_pgm(read_pgm(first)) == first

    @given(gray_images())
    def test_p2_and_p5_parse_to_same_image(self, img):
        assert read_pgm(write_pgm(img, ascii=True)) == read_pgm(write_pgm(img))

    def test_ascii_lines_stay_short(self):
        img = GrayImage(40, 3, [255] * 120)
        for line in write_pgm(img, ascii=True).decode().splitlines():
            assert len(line) <= 70


class TestPngPreview:
    @given(gray_images())
    def test_pillow_decodes_back_to_input(self, img):
        decoded = Image.open(BytesIO(encode_png_preview(img)))
        assert decoded.mode == "L"
        assert np.array_equal(np.asarray(decoded), img.to_2d())

    def test_single_black_pixel(self):
        decoded = Image.open(BytesIO(encode_png_preview(GrayImage(1, 1, [0]))))
        assert np.asarray(decoded).tolist() == [[0]]

    def test_mask_decodes_to_0_255(self):
        png = encode_png_preview(BinaryImage(2, 2, [1, 1, 1, 1]))
        assert np.asarray(Image.open(BytesIO(png))).min() == 255

    def test_byte_deterministic(self):
        img = GrayImage(9, 4, list(range(36)))
        assert encode_png_preview(img) == encode_png_preview(img)


class TestReadImageBytes:
    def test_pgm_passthrough(self):
        img = GrayImage(2, 2, [5, 6, 7, 8])
        assert read_image_bytes(write_pgm(img)) == img

    def test_grayscale_png(self):
        img = GrayImage(3, 2, [0, 50, 100, 150, 200, 250])
        assert read_image_bytes(encode_png_preview(img)) == img

    def test_color_png_goes_through_luma(self):
        buf = BytesIO()
        Image.new("RGB", (1, 1), (255, 0, 0)).save(buf, format="PNG")
        img = read_image_bytes(buf.getvalue())
        assert img.pixels.tolist() == [76]

    def test_rejects_other_formats(self):
        with pytest.raises(UnsupportedFormatError):
            read_image_bytes(b"GIF89a....")

    def test_rejects_empty(self):
        with pytest.raises(UnsupportedFormatError):
            read_image_bytes(b"")

    def test_rejects_16bit_png(self):
        buf = BytesIO()
        Image.new("I;16", (2, 2), 1000).save(buf, format="PNG")
        with pytest.raises(UnsupportedDepthError):
            read_image_bytes(buf.getvalue())


class TestWriteReport:
    def test_empty_list(self):
        assert json.loads(write_report([])) == []

    def test_single_entry_schema(self):
        entry = ReportEntry("img1", "hdt", 100, 1333.3333333, 0.4, 812)
        [obj] = json.loads(write_report([entry]))
        assert obj == {
            "image_id": "img1",
            "method": "hdt",
            "t": 100,
            "criterion": 1333.333333,
            "foreground_fraction": 0.4,
            "elapsed_micros": 812,
        }

    def test_missing_criterion_serializes_null(self):
        [obj] = json.loads(write_report([ReportEntry("a", "manual", 127, None, 0.5, 3)]))
        assert obj["criterion"] is None

    def test_round_trip_order_and_values(self):
        entries = [
            ReportEntry("a", "mean", 12, None, 0.25, 1),
            ReportEntry("b", "ptile", 200, 0.1, 0.1, 2),
        ]
        parsed = json.loads(write_report(entries))
        assert [e["image_id"] for e in parsed] == ["a", "b"]
        assert parsed[1]["criterion"] == 0.1

    def test_fraction_digits_capped(self):
        entry = ReportEntry("x", "ptile", 3, 1 / 3, 2 / 3, 0)
        [obj] = json.loads(write_report([entry]))
        for value in (obj["criterion"], obj["foreground_fraction"]):
            digits = str(value).split(".")[1]
            assert len(digits) <= 6

    def test_rejects_bad_fraction(self):
        with pytest.raises(ValueError):
            ReportEntry("x", "mean", 1, None, 1.5, 0)
