"""Shipping gate: one test per release criterion.

Every test pins its tolerance explicitly and, where a runtime budget is
part of the criterion, measures wall time against it. Reference values
come from the independent oracles in tests/oracles.py, never from the
library under test.
"""

import json
import time

import jsonschema
import numpy as np
import pytest
from fastapi.testclient import TestClient

import oracles
from threshkit import (
    GrayImage,
    Histogram,
    NoEdgesError,
    apply_threshold,
    compute_histogram,
    emt_threshold,
    hdt_threshold,
    kirsch_edges,
    mean_threshold,
    ptile_threshold,
    read_pgm,
    write_pgm,
)
from threshkit.cli import EXIT_OK, main
from threshkit.dispatch import select_threshold
from threshkit.formats import encode_png_preview
from threshkit.service import PGM_MEDIA_TYPE, create_app


def make_image(values, width, height):
    return GrayImage(width=width, height=height,
                     pixels=np.asarray(values, dtype=np.uint8))


def random_image(rng, max_side=32, lo=0, hi=255):
    w = int(rng.integers(1, max_side + 1))
    h = int(rng.integers(1, max_side + 1))
    return make_image(rng.integers(lo, hi + 1, w * h, dtype=np.int64), w, h)


def hist_of(counts):
    counts = np.asarray(counts, dtype=np.int64)
    return Histogram(counts=counts, total=int(counts.sum()))


def gauss_mix_hist(rng):
    """1-4 gaussian-shaped bumps plus uniform noise, 1e2..1e6 pixels."""
    size = int(10 ** rng.uniform(2, 6))
    k = int(rng.integers(1, 5))
    levels = np.arange(256)
    counts = np.zeros(256, dtype=np.int64)
    shares = rng.dirichlet(np.ones(k))
    noise_share = rng.uniform(0.0, 0.2)
    for j in range(k):
        mu = rng.uniform(0, 255)
        sigma = rng.uniform(2, 60)
        pdf = np.exp(-0.5 * ((levels - mu) / sigma) ** 2)
        counts += np.round(pdf / pdf.sum() * size * (1 - noise_share) * shares[j]).astype(np.int64)
    counts += rng.integers(0, max(2, int(size * noise_share / 256) + 1), 256)
    deficit = 100 - int(counts.sum())
    if deficit > 0:
        counts[int(rng.integers(0, 256))] += deficit
    return counts


def test_hdt_matches_direct_partition_oracle():
    """Chosen t exact, criterion within rel 1e-6, on 1000 seeded histograms, <10 s."""
    rng = np.random.default_rng(2026)
    start = time.perf_counter()
    for _ in range(1000):
        counts = gauss_mix_hist(rng)
        expected_t, expected_c = oracles.hdt_direct(counts)
        result = hdt_threshold(hist_of(counts))
        assert result.t == expected_t
        assert result.criterion == pytest.approx(expected_c, rel=1e-6, abs=1e-9)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"hdt equivalence took {elapsed:.1f}s"


def test_ptile_defining_property():
    """above-t fraction <= p and above-(t-1) fraction > p, 1000 images x 7 p, <5 s."""
    rng = np.random.default_rng(77)
    ps = (0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99)
    start = time.perf_counter()
    for trial in range(1000):
        style = trial % 3
        if style == 0:
            img = random_image(rng)
        elif style == 1:
            lo = int(rng.integers(0, 250))
            img = random_image(rng, lo=lo, hi=min(255, lo + 5))
        else:
            v = int(rng.integers(0, 256))
            img = random_image(rng, lo=v, hi=v)
        hist = compute_histogram(img)
        n = img.pixels.size
        for p in ps:
            t = ptile_threshold(hist, p).t
            assert int((img.pixels > t).sum()) / n <= p
            if t > 0:
                assert int((img.pixels > t - 1).sum()) / n > p
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"ptile property took {elapsed:.1f}s"


def test_binarization_matches_naive_loop():
    """200 random (image, t) pairs agree with the per-pixel oracle, exact."""
    rng = np.random.default_rng(5)
    for _ in range(200):
        img = random_image(rng, max_side=12)
        t = int(rng.integers(0, 256))
        mask = apply_threshold(img, t)
        assert mask.mask.tolist() == oracles.naive_binarize(img.pixels.tolist(), t)


def test_foreground_sets_nest_as_t_ascends():
    rng = np.random.default_rng(6)
    for _ in range(20):
        img = random_image(rng, max_side=16)
        prev = apply_threshold(img, 0).mask
        for t in range(1, 256):
            cur = apply_threshold(img, t).mask
            assert np.all(cur <= prev), f"foreground grew at t={t}"
            prev = cur


def test_mean_is_exact_integer_floor():
    """500 random images against pure-python big-integer division."""
    rng = np.random.default_rng(8)
    for _ in range(500):
        img = random_image(rng)
        expected = oracles.mean_floor(img.pixels.tolist())
        assert mean_threshold(compute_histogram(img)).t == expected
    board = make_image([0, 255] * 32, 8, 8)
    assert mean_threshold(compute_histogram(board)).t == 127


def test_kirsch_constant_step_and_rotation():
    # constant images: zero map
    for w, h, v in ((1, 1, 0), (3, 3, 128), (5, 7, 255)):
        edges = kirsch_edges(make_image([v] * (w * h), w, h))
        assert not np.asarray(edges.magnitudes).any()

    # 0 -> 255 vertical step: dark-side interior boundary column is exactly 3825
    w = h = 8
    row = [0] * 4 + [255] * 4
    img = make_image(row * h, w, h)
    mags = np.asarray(kirsch_edges(img).magnitudes).reshape(h, w)
    assert np.all(mags[1:-1, 3] == 3825)

    # interior rotation equivariance on 50 random squares, exact
    rng = np.random.default_rng(13)
    for _ in range(50):
        side = int(rng.integers(3, 13))
        grid = rng.integers(0, 256, (side, side), dtype=np.int64)
        img = GrayImage.from_2d(grid.astype(np.uint8))
        rot = GrayImage.from_2d(np.rot90(grid).astype(np.uint8))
        m = np.asarray(kirsch_edges(img).magnitudes).reshape(side, side)
        mr = np.asarray(kirsch_edges(rot).magnitudes).reshape(side, side)
        assert np.array_equal(mr[1:-1, 1:-1], np.rot90(m)[1:-1, 1:-1])


def test_emt_synthetic_determinism_and_no_edges():
    # half 0 / half 200: mask is exactly the right-half indicator
    img = make_image(([0] * 4 + [200] * 4) * 8, 8, 8)
    result = emt_threshold(img, 0.9)
    mask = apply_threshold(img, result.t).mask.reshape(8, 8)
    expected = np.zeros((8, 8), dtype=np.uint8)
    expected[:, 4:] = 1
    assert np.array_equal(mask, expected)

    # determinism across repeated runs
    rng = np.random.default_rng(21)
    noisy = random_image(rng, max_side=16, lo=0, hi=255)
    runs = [emt_threshold(noisy, 0.9) for _ in range(3)]
    assert len({r.t for r in runs}) == 1
    assert len({r.criterion for r in runs}) == 1

    with pytest.raises(NoEdgesError):
        emt_threshold(make_image([42] * 25, 5, 5), 0.9)


def test_shift_equivariance():
    """Adding c to every pixel shifts mean/ptile/hdt thresholds by exactly c."""
    rng = np.random.default_rng(34)
    for _ in range(100):
        img = random_image(rng, hi=205)
        hist = compute_histogram(img)
        base = {
            "mean": mean_threshold(hist).t,
            "ptile": ptile_threshold(hist, 0.5).t,
            "hdt": hdt_threshold(hist).t,
        }
        for c in (1, 10, 50):
            shifted = make_image(img.pixels.astype(np.int64) + c, img.width, img.height)
            shist = compute_histogram(shifted)
            moved = {
                "mean": mean_threshold(shist).t,
                "ptile": ptile_threshold(shist, 0.5).t,
                "hdt": hdt_threshold(shist).t,
            }
            for name, t0 in base.items():
                assert moved[name] == t0 + c, f"{name} broke under +{c}"
                before = apply_threshold(img, t0).mask
                after = apply_threshold(shifted, t0 + c).mask
                assert np.array_equal(before, after)


def test_pgm_round_trips_bit_exact():
    rng = np.random.default_rng(55)
    for _ in range(200):
        img = random_image(rng, max_side=24)
        data = write_pgm(img)
        back = read_pgm(data)
        assert back == img
        assert write_pgm(back) == data
        assert read_pgm(write_pgm(img, ascii=True)) == back


REPORT_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["image_id", "method", "t", "criterion",
                     "foreground_fraction", "elapsed_micros"],
        "additionalProperties": False,
        "properties": {
            "image_id": {"type": "string", "minLength": 1},
            "method": {"enum": ["manual", "mean", "ptile", "hdt", "emt"]},
            "t": {"type": "integer", "minimum": 0, "maximum": 255},
            "criterion": {"type": ["number", "null"]},
            "foreground_fraction": {"type": "number", "minimum": 0, "maximum": 1},
            "elapsed_micros": {"type": "integer", "minimum": 0},
        },
    },
}


def _write_synthetics(tmp_path):
    rng = np.random.default_rng(99)
    gradient = np.tile(np.linspace(0, 255, 32).astype(np.uint8), 32)
    blocks = np.repeat([40, 210], 512).astype(np.uint8)
    noise = rng.integers(0, 256, 1024, dtype=np.uint8)
    paths = []
    for name, vals in (("grad", gradient), ("blocks", blocks), ("noise", noise)):
        path = tmp_path / f"{name}.pgm"
        path.write_bytes(write_pgm(make_image(vals, 32, 32)))
        paths.append(path)
    return paths


def test_cli_compare_batch(tmp_path, capsys):
    """3 images, manual 127/167/43: 15 masks, schema-valid deterministic report."""
    paths = _write_synthetics(tmp_path)
    out_dirs = []
    for run in ("one", "two"):
        out = tmp_path / run
        argv = ["compare", "-o", str(out)]
        for p in paths:
            argv += ["-i", str(p)]
        argv += ["--t", "127", "--t", "167", "--t", "43"]
        assert main(argv) == EXIT_OK
        capsys.readouterr()
        out_dirs.append(out)

    masks = sorted(f.name for f in out_dirs[0].glob("*.pgm"))
    assert len(masks) == 15

    report = json.loads((out_dirs[0] / "report.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert len(report) == 15
    assert [e["t"] for e in report if e["method"] == "manual"] == [127, 167, 43]

    # byte determinism, timing fields excluded from the report comparison
    for name in masks:
        assert (out_dirs[0] / name).read_bytes() == (out_dirs[1] / name).read_bytes()

    def strip(path):
        entries = json.loads((path / "report.json").read_text())
        for e in entries:
            del e["elapsed_micros"]
        return entries

    assert strip(out_dirs[0]) == strip(out_dirs[1])


def test_cli_compare_512_under_one_second(tmp_path, capsys):
    rng = np.random.default_rng(2)
    big = make_image(rng.integers(0, 256, 512 * 512, dtype=np.int64), 512, 512)
    path = tmp_path / "big.pgm"
    path.write_bytes(write_pgm(big))
    out = tmp_path / "out"
    start = time.perf_counter()
    code = main(["compare", "-o", str(out), "-i", str(path), "--t", "127"])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert code == EXIT_OK
    assert len(list(out.glob("*.pgm"))) == 5
    assert elapsed < 1.0, f"512x512 compare took {elapsed:.2f}s"


def test_service_equals_library():
    """20 uploaded images: /threshold and /binary match library output exactly."""
    client = TestClient(create_app())
    rng = np.random.default_rng(123)
    for _ in range(20):
        img = random_image(rng, max_side=24)
        if img.pixels.min() == img.pixels.max():
            # keep emt in play: force two distinct levels
            raw = img.pixels.copy()
            raw[0] = (int(raw[0]) + 1) % 256
            img = make_image(raw, img.width, img.height)
        resp = client.post("/api/images", content=write_pgm(img))
        assert resp.status_code == 201
        image_id = resp.json()["id"]

        for method in ("mean", "ptile", "hdt", "emt"):
            body = client.get(f"/api/images/{image_id}/threshold",
                              params={"method": method}).json()
            expected = select_threshold(img, method)
            assert body["t"] == expected.t
            assert body["criterion"] == expected.criterion
            assert body["params"] == expected.params

        hdt_t = select_threshold(img, "hdt").t
        for t in (0, 127, hdt_t, 255):
            mask = apply_threshold(img, t)
            png = client.get(f"/api/images/{image_id}/binary", params={"t": t})
            assert png.content == encode_png_preview(mask)
            pgm = client.get(f"/api/images/{image_id}/binary", params={"t": t},
                             headers={"accept": PGM_MEDIA_TYPE})
            assert pgm.content == write_pgm(mask)
