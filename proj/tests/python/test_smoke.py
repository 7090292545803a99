"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import sgm4k


def random_pair(w, h, shift, seed):
    rng = np.random.default_rng(seed)
    right = rng.integers(0, 256, size=(h, w), dtype=np.uint8)
    cols = np.clip(np.arange(w) - shift, 0, w - 1)
    left = right[:, cols]
    return left, right


def test_identical_pair_gives_zero_disparity():
    left, _ = random_pair(24, 12, 0, 1)
    for fn in (sgm4k.run_sgm, sgm4k.run_4ppc):
        disp = fn(left, left, disp_range=8)
        assert disp.shape == (12, 24)
        assert disp.dtype == np.int32
        assert np.all(disp == 0)
    disp, _stats = sgm4k.run_streaming(left, left, disp_range=8)
    assert np.all(disp == 0)


def test_shifted_pair_recovers_the_shift():
    left, right = random_pair(64, 20, 6, 2)
    disp = sgm4k.run_sgm(left, right, disp_range=16)
    interior = disp[:, 16:-4]
    assert np.all(interior == 6)


def test_streaming_matches_run_4ppc():
    left, right = random_pair(30, 11, 4, 3)
    batch = sgm4k.run_4ppc(left, right, disp_range=8)
    streamed, stats = sgm4k.run_streaming(left, right, disp_range=8)
    assert np.array_equal(batch, streamed)
    assert stats["line_buffer_entries"] == 3 * 32 * 8
    assert stats["total_entries"] <= 3 * 32 * 8 + 8 + (12 * 32 + 20 * 8)


def test_census_and_cost_volume_shapes():
    left, right = random_pair(16, 10, 2, 4)
    cl, cr = sgm4k.census_transform(left), sgm4k.census_transform(right)
    assert cl.dtype == np.uint32
    assert np.all(cl >> sgm4k.CENSUS_BITS == 0)
    vol = sgm4k.cost_volume(cl, cr, 8)
    assert vol.shape == (10, 16, 8)
    assert vol.max() <= 24
    disp = sgm4k.select_disparity(
        sgm4k.aggregate_path(vol, 90, 7, 86).astype(np.int32)
    )
    assert disp.shape == (10, 16)


def test_estimate_prev_matches_numpy_floor_division():
    rng = np.random.default_rng(5)
    last = rng.integers(0, 140, size=32).astype(np.int32)
    c1 = rng.integers(0, 25, size=32).astype(np.int32)
    c2 = rng.integers(0, 25, size=32).astype(np.int32)
    c3 = rng.integers(0, 25, size=32).astype(np.int32)
    lam = 4
    lane2, lane3, lane4 = sgm4k.estimate_prev(last, c1, c2, c3, lam)
    avg12 = (c1 + c2) // 2
    avg123 = (avg12 + c3) // 2
    assert np.array_equal(lane2, last + (c1 - last) // lam)  # numpy // floors
    assert np.array_equal(lane3, last + (avg12 - last) // lam)
    assert np.array_equal(lane4, last + (avg123 - last) // lam)


def test_pgm_round_trip(tmp_path):
    img = np.arange(48, dtype=np.uint8).reshape(6, 8)
    sgm4k.save_pgm(img, tmp_path / "x.pgm")
    assert np.array_equal(sgm4k.load_pgm(tmp_path / "x.pgm"), img)


def test_pfm_round_trip(tmp_path):
    gt = np.linspace(-4.0, 9.0, 35, dtype=np.float32).reshape(5, 7)
    gt[0, 0] = np.inf
    sgm4k.save_pfm(gt, tmp_path / "x.pfm")
    assert np.array_equal(sgm4k.load_pfm(tmp_path / "x.pfm"), gt)


def test_bad_pixel_rate_and_mask():
    disp = np.full((4, 6), 3, dtype=np.int32)
    gt = np.full((4, 6), 3.0, dtype=np.float32)
    assert sgm4k.bad_pixel_rate(disp, gt, threshold=1.0) == 0.0
    disp[0, 0] = sgm4k.INVALID_DISPARITY
    rate = sgm4k.bad_pixel_rate(disp, gt, threshold=1.0)
    assert rate == pytest.approx(100.0 / 24.0)
    mask = np.zeros((4, 6), dtype=bool)
    mask[1:, :] = True
    assert sgm4k.bad_pixel_rate(disp, gt, mask=mask, threshold=1.0) == 0.0


def test_mde_formula():
    assert sgm4k.mde_rounded(3840, 2160, 64, 30) == 15925
    assert sgm4k.mde_rounded(1920, 1080, 128, 30) == 7963
    assert sgm4k.mde_per_second(1, 1, 1, 1) == pytest.approx(1e-6)


def test_errors_are_python_exceptions(tmp_path):
    with pytest.raises(sgm4k.IoError):
        sgm4k.load_pgm(tmp_path / "missing.pgm")
    with pytest.raises(sgm4k.ParamError):
        sgm4k.run_sgm(
            np.zeros((8, 8), dtype=np.uint8),
            np.zeros((8, 8), dtype=np.uint8),
            disp_range=8,
            lam=3,
        )
