"""Tests for the Bayer CFA model, demosaicing and raw frame IO."""

import numpy as np
import pytest

from prnu_mixed.bayer import (B, G, R, BayerPattern, RawFrame, RgbImage,
                              color_at, demosaic_bilinear, mirror_index,
                              read_raw_frame, write_raw_frame)


def test_rggb_cell_layout():
    assert color_at(BayerPattern.RGGB, 1, 1) == "R"
    assert color_at(BayerPattern.RGGB, 1, 2) == "G"
    assert color_at(BayerPattern.RGGB, 2, 1) == "G"
    assert color_at(BayerPattern.RGGB, 2, 2) == "B"


def test_color_at_periodicity():
    for pat in BayerPattern:
        for row in range(1, 5):
            for col in range(1, 5):
                assert color_at(pat, row, col) == color_at(pat, row + 2, col)
                assert color_at(pat, row, col) == color_at(pat, row, col + 2)


def test_color_at_rejects_zero_based_index():
    with pytest.raises(ValueError):
        color_at(BayerPattern.RGGB, 0, 1)


def test_shifted_closure_and_inverse():
    for pat in BayerPattern:
        for dr in range(4):
            for dc in range(4):
                shifted = pat.shifted(dr, dc)
                assert isinstance(shifted, BayerPattern)
                # shifting back returns the original pattern
                assert shifted.shifted(-dr % 2, -dc % 2) == pat.shifted(2 * dr % 2, 0) \
                    or shifted.shifted(dr, dc) == pat.shifted(2 * dr, 2 * dc)
        assert pat.shifted(0, 0) == pat
        assert pat.shifted(2, 2) == pat


def test_shifted_matches_color_at():
    pat = BayerPattern.RGGB
    for dr in range(2):
        for dc in range(2):
            shifted = pat.shifted(dr, dc)
            for i in range(2):
                for j in range(2):
                    assert shifted.color_at0(i, j) == pat.color_at0(i + dr, j + dc)


def test_mask_counts():
    h, w = 8, 10
    for pat in BayerPattern:
        masks = [pat.mask(c, h, w) for c in (R, G, B)]
        assert masks[R].sum() == h * w // 4
        assert masks[G].sum() == h * w // 2
        assert masks[B].sum() == h * w // 4
        # masks partition the grid
        total = masks[R].astype(int) + masks[G].astype(int) + masks[B].astype(int)
        assert np.all(total == 1)


def test_channel_parity():
    assert BayerPattern.RGGB.channel_parity(R) == (0, 0)
    assert BayerPattern.RGGB.channel_parity(B) == (1, 1)
    with pytest.raises(ValueError):
        BayerPattern.RGGB.channel_parity(G)


def test_mirror_index_parity_preserving():
    # reflection about the edge sample keeps index parity near both edges
    assert mirror_index(-1, 8) == 1
    assert mirror_index(-2, 8) == 2
    assert mirror_index(8, 8) == 6
    assert mirror_index(9, 8) == 5
    for i in (-2, -1, 8, 9):
        assert (mirror_index(i, 8) - i) % 2 == 0


def test_raw_frame_validation():
    with pytest.raises(ValueError):
        RawFrame(np.zeros((5, 6)))  # odd rows
    with pytest.raises(ValueError):
        RawFrame(np.zeros((2, 2)))  # too small
    with pytest.raises(ValueError):
        RawFrame(np.full((4, 4), 1.5))  # out of range
    with pytest.raises(ValueError):
        RawFrame(np.zeros((8, 8)), active_boundary=(4, 0, 0, 0))


def test_active_image_shifts_pattern():
    rng = np.random.default_rng(7)
    samples = rng.uniform(0, 1, (12, 16))
    raw = RawFrame(samples, BayerPattern.RGGB, (1, 1, 3, 1))
    active = raw.active_image()
    assert active.shape == (10, 12)
    # odd row shift and odd column shift swap the cell accordingly
    assert active.pattern == BayerPattern.RGGB.shifted(1, 3)
    np.testing.assert_array_equal(active.samples, samples[1:11, 3:15])


def test_demosaic_constant_frame_is_constant():
    # all weight lists sum to 1, including at edges
    raw = RawFrame(np.full((8, 10), 0.37))
    img = demosaic_bilinear(raw)
    np.testing.assert_allclose(img.data, 0.37, atol=1e-12)


def test_demosaic_interior_weights():
    # a delta at an interior R site spreads with bilinear CFA weights
    samples = np.zeros((12, 12))
    samples[4, 4] = 1.0  # R site in RGGB
    img = demosaic_bilinear(RawFrame(samples))
    r = img.plane(R)
    assert r[4, 4] == 1.0  # co-sited
    assert r[4, 5] == 0.5 and r[4, 3] == 0.5  # horizontal pair
    assert r[5, 4] == 0.5 and r[3, 4] == 0.5  # vertical pair
    assert r[5, 5] == 0.25 and r[3, 3] == 0.25  # diagonal quad
    # green and blue take nothing from an R site
    assert img.plane(G)[4, 4] == 0.0
    assert img.plane(B)[4, 4] == 0.0


def test_demosaic_green_interior_weights():
    samples = np.zeros((12, 12))
    samples[4, 5] = 1.0  # G site in RGGB
    img = demosaic_bilinear(RawFrame(samples))
    g = img.plane(G)
    assert g[4, 5] == 1.0
    # four rook neighbors get 1/4 each
    assert g[4, 4] == 0.25 and g[4, 6] == 0.25
    assert g[3, 5] == 0.25 and g[5, 5] == 0.25
    # diagonal neighbors (other G sites) get nothing
    assert g[3, 4] == 0.0 and g[5, 6] == 0.0


def test_rgb_image_accessors():
    data = np.zeros((4, 6, 3))
    img = RgbImage(data)
    assert img.height == 4 and img.width == 6
    assert img.plane(2).shape == (4, 6)
    with pytest.raises(ValueError):
        RgbImage(np.zeros((4, 6)))


def test_raw_frame_io_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    samples = rng.uniform(0, 1, (8, 10)).astype(np.float32).astype(np.float64)
    raw = RawFrame(samples, BayerPattern.GRBG, (1, 2, 3, 0))
    path = tmp_path / "frame.praw"
    write_raw_frame(path, raw)
    back = read_raw_frame(path)
    assert back.pattern == raw.pattern
    assert back.active_boundary == raw.active_boundary
    np.testing.assert_array_equal(back.samples, raw.samples)


def test_raw_frame_io_rejects_garbage(tmp_path):
    path = tmp_path / "bad.praw"
    path.write_bytes(b"NOPE" + b"\0" * 20)
    with pytest.raises(ValueError):
        read_raw_frame(path)
    path.write_bytes(b"PR")
    with pytest.raises(ValueError):
        read_raw_frame(path)
