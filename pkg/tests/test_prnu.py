"""Tests for noise extraction, NCC, PCE and fingerprint IO."""

import numpy as np
import pytest

from prnu_mixed.bayer import RgbImage
from prnu_mixed.prnu import (CHANNEL_WEIGHTS, PCE_SENTINEL, Fingerprint,
                             NoisePattern, accumulate_fingerprint, correlate,
                             extract_noise, ncc_surface, ncc_surface_direct,
                             pce, peak_location, pearson, read_fingerprint,
                             write_fingerprint, zero_mean_total)


def test_channel_weights():
    assert CHANNEL_WEIGHTS == (0.3, 0.6, 0.1)
    assert abs(sum(CHANNEL_WEIGHTS) - 1.0) < 1e-12


def test_zero_mean_total():
    rng = np.random.default_rng(0)
    out = zero_mean_total(rng.normal(0, 1, (20, 30)) + 3.0)
    np.testing.assert_allclose(out.mean(), 0, atol=1e-12)
    np.testing.assert_allclose(out.mean(axis=0), 0, atol=1e-12)
    np.testing.assert_allclose(out.mean(axis=1), 0, atol=1e-12)


def test_extract_noise_zero_mean_and_shape():
    rng = np.random.default_rng(1)
    img = RgbImage(np.clip(rng.normal(0.5, 0.1, (24, 32, 3)), 0, 1))
    pat = extract_noise(img)
    assert pat.plane.shape == (24, 32)
    assert abs(pat.plane.mean()) < 1e-12
    assert not pat.low_quality


def test_extract_noise_flat_image_is_low_quality():
    img = RgbImage(np.full((16, 16, 3), 0.5))
    pat = extract_noise(img)
    assert pat.low_quality


def test_accumulate_fingerprint_mean_and_validation():
    a = NoisePattern(np.full((4, 4), 1.0))
    b = NoisePattern(np.full((4, 4), 3.0))
    fp = accumulate_fingerprint([a, b])
    np.testing.assert_allclose(fp.plane, 2.0)
    assert fp.count == 2
    with pytest.raises(ValueError):
        accumulate_fingerprint([])
    with pytest.raises(ValueError):
        accumulate_fingerprint([a, NoisePattern(np.zeros((4, 5)))])


def test_fingerprint_provenance_validation():
    with pytest.raises(ValueError):
        Fingerprint(np.zeros((4, 4)), provenance="webcam FE")


def test_pearson():
    rng = np.random.default_rng(2)
    a = rng.normal(0, 1, 100)
    assert pearson(a, 2 * a + 5) == pytest.approx(1.0)
    assert pearson(a, -a) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        pearson(a, np.zeros(100))


def test_ncc_matches_direct_reference():
    rng = np.random.default_rng(3)
    a = rng.normal(0, 1, (20, 25))
    b = rng.normal(0, 1, (6, 7))
    fast = ncc_surface(a, b, mode="valid")
    slow = ncc_surface_direct(a, b)
    np.testing.assert_allclose(fast, slow, atol=1e-10)


def test_ncc_peak_equivariance():
    # embedding the template at offset (dy, dx) puts the peak at (dy, dx)
    rng = np.random.default_rng(4)
    b = rng.normal(0, 1, (12, 14))
    for dy, dx in ((0, 0), (5, 3), (10, 17)):
        a = rng.normal(0, 0.05, (40, 50))
        a[dy:dy + 12, dx:dx + 14] += b
        surface = ncc_surface(a, b, mode="valid")
        assert peak_location(surface) == (dy, dx)
        assert surface[dy, dx] > 0.9


def test_ncc_full_mode_offset_convention():
    rng = np.random.default_rng(5)
    b = rng.normal(0, 1, (8, 9))
    a = np.zeros((30, 30))
    a[4:12, 6:15] = b
    surface = ncc_surface(a, b, mode="full")
    pi, pj = peak_location(surface)
    assert (pi - 8 + 1, pj - 9 + 1) == (4, 6)


def test_ncc_values_bounded():
    rng = np.random.default_rng(6)
    surface = ncc_surface(rng.normal(0, 1, (30, 30)), rng.normal(0, 1, (10, 10)))
    assert surface.max() <= 1.0 and surface.min() >= -1.0


def test_ncc_invariant_to_affine_rescaling():
    rng = np.random.default_rng(7)
    a = rng.normal(0, 1, (25, 25))
    b = rng.normal(0, 1, (9, 9))
    base = ncc_surface(a, b)
    np.testing.assert_allclose(ncc_surface(3 * a + 2, 0.5 * b - 1, mode="valid"),
                               base, atol=1e-9)


def test_ncc_rejects_bad_inputs():
    with pytest.raises(ValueError):
        ncc_surface(np.zeros((5, 5)), np.zeros((8, 8)), mode="valid")
    with pytest.raises(ValueError):
        ncc_surface(np.ones((10, 10)), np.ones((4, 4)))  # zero-variance template


def test_pce_scale_invariance():
    rng = np.random.default_rng(8)
    surface = rng.normal(0, 0.01, (21, 21))
    surface[13, 7] = 0.9
    base = pce(surface)
    assert pce(5.0 * surface) == pytest.approx(base)
    assert pce(0.001 * surface) == pytest.approx(base)


def test_pce_excludes_window_around_peak():
    surface = np.zeros((21, 21))
    surface[10, 10] = 1.0
    # energy inside the 11x11 window must not count as background
    surface[12, 12] = 0.8
    assert pce(surface) == PCE_SENTINEL  # all off-window background is zero


def test_pce_negative_peak_carries_sign():
    rng = np.random.default_rng(9)
    surface = rng.normal(0, 0.01, (21, 21))
    surface[4, 4] = -0.9
    assert pce(surface, peak=(4, 4)) < 0


def test_pce_surface_size_guard():
    with pytest.raises(ValueError):
        pce(np.zeros((8, 8)))


def test_correlate_end_to_end():
    rng = np.random.default_rng(10)
    b = rng.normal(0, 1, (16, 16))
    a = rng.normal(0, 0.05, (48, 48))
    a[20:36, 5:21] += b
    res = correlate(a, b, mode="valid")
    assert res.peak_offset == (20, 5)
    assert res.peak_pce > 60
    assert res.rho_at_peak > 0.9


def test_fingerprint_io_roundtrip(tmp_path):
    rng = np.random.default_rng(11)
    plane = rng.normal(0, 1, (20, 24)).astype(np.float32).astype(np.float64)
    fp = Fingerprint(plane, count=17, provenance="video FE", denoiser="mean3")
    path = tmp_path / "cam.fpr"
    write_fingerprint(path, fp)
    back = read_fingerprint(path)
    assert back.count == 17
    assert back.provenance == "video FE"
    assert back.denoiser == "mean3"
    np.testing.assert_array_equal(back.plane, fp.plane)


def test_fingerprint_io_rejects_garbage(tmp_path):
    path = tmp_path / "bad.fpr"
    path.write_bytes(b"XXXX" + b"\0" * 30)
    with pytest.raises(ValueError):
        read_fingerprint(path)
