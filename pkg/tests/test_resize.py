"""Tests for the concrete resizing transforms."""

import numpy as np
import pytest

from prnu_mixed.bayer import BayerPattern, RawFrame
from prnu_mixed.resize import (BilinearScale, Binning, LineSkip,
                               bilinear_scale_plane, bin_mosaic, bin_raw,
                               boundary_crop_amounts, box_downscale_plane,
                               crop_boundary_plane, crop_center_plane,
                               line_skip, line_skip_mosaic)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        Binning(k=5)
    with pytest.raises(ValueError):
        Binning(k=2, phase=(2, 0))
    with pytest.raises(ValueError):
        LineSkip(row_phase=4)
    BilinearScale()  # default constructs


def test_bin_mosaic_constant_preserved():
    out = bin_mosaic(np.full((8, 12), 0.4), 2)
    assert out.shape == (4, 6)
    np.testing.assert_allclose(out, 0.4)


def test_bin_mosaic_same_parity_average():
    s = np.zeros((8, 8))
    # the four (even, even) sites of the first 4x4 block
    s[0, 0] = s[0, 2] = s[2, 0] = s[2, 2] = 1.0
    out = bin_mosaic(s, 2)
    assert out[0, 0] == 1.0  # average of exactly those four sites
    assert out[1, 1] == 0.0  # odd parity untouched


def test_bin_mosaic_phase_shifts_window():
    rng = np.random.default_rng(0)
    s = rng.uniform(0, 1, (12, 12))
    shifted = bin_mosaic(s, 2, phase=(1, 0))
    direct = bin_mosaic(s[2:10, :], 2)  # drop 2 rows, bin the 8-row remainder
    np.testing.assert_allclose(shifted, direct)


def test_bin_raw_divisibility():
    raw = RawFrame(np.zeros((10, 8)))
    with pytest.raises(ValueError):
        bin_raw(raw, 2)


def test_line_skip_phase_and_pattern():
    rng = np.random.default_rng(1)
    raw = RawFrame(rng.uniform(0, 1, (8, 8)))
    out = line_skip(raw, 0, 0)
    np.testing.assert_array_equal(out.samples, raw.samples[np.ix_([0, 1, 4, 5], [0, 1, 4, 5])])
    assert out.pattern == BayerPattern.RGGB
    out2 = line_skip(raw, 1, 2)
    assert out2.pattern == BayerPattern.RGGB.shifted(1, 2)


def test_line_skip_mosaic_halves_dims():
    out = line_skip_mosaic(np.zeros((16, 12)), 3, 1)
    assert out.shape == (8, 6)


def test_box_downscale_plane():
    a = np.arange(16, dtype=float).reshape(4, 4)
    out = box_downscale_plane(a, 2)
    assert out.shape == (2, 2)
    assert out[0, 0] == np.mean([0, 1, 4, 5])


def test_bilinear_equals_box_at_half():
    # at factor 1/2 the coordinate-mapped bilinear taps are the 2x2 box
    rng = np.random.default_rng(2)
    a = rng.uniform(0, 1, (10, 14))
    np.testing.assert_allclose(bilinear_scale_plane(a, 0.5), box_downscale_plane(a, 2))


def test_bilinear_identity_at_one():
    rng = np.random.default_rng(3)
    a = rng.uniform(0, 1, (7, 9))
    np.testing.assert_allclose(bilinear_scale_plane(a, 1), a)


def test_bilinear_out_shape_override():
    a = np.ones((10, 10))
    out = bilinear_scale_plane(a, 0.77, out_shape=(8, 8))
    assert out.shape == (8, 8)
    np.testing.assert_allclose(out, 1.0)


def test_bilinear_constant_preserved():
    out = bilinear_scale_plane(np.full((9, 13), 0.3), 0.6)
    np.testing.assert_allclose(out, 0.3)


def test_crop_center_plane():
    a = np.arange(36, dtype=float).reshape(6, 6)
    out = crop_center_plane(a, 2, 4)
    np.testing.assert_array_equal(out, a[2:4, 1:5])
    with pytest.raises(ValueError):
        crop_center_plane(a, 8, 2)


def test_boundary_crop_amounts_aspect_matched():
    # columns scale with the frame aspect: round(rows * W / H)
    assert boundary_crop_amounts(720, 1280, 9) == (9, 16)
    assert boundary_crop_amounts(100, 100, 5) == (5, 5)
    assert boundary_crop_amounts(100, 100, 5, preserve_aspect=False) == (5, 0)
    with pytest.raises(ValueError):
        boundary_crop_amounts(10, 100, 5)


def test_crop_boundary_plane_dims():
    a = np.zeros((720, 1280))
    out = crop_boundary_plane(a, 9)
    assert out.shape == (702, 1248)
