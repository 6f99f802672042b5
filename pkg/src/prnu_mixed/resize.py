"""Concrete resizing transforms: binning, line-skipping, scaling, cropping.

These operate on plain arrays / frames and are the fast path; the symbolic
weight-map equivalents live in weightmap.py and pipeline.py.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bayer import RawFrame, RgbImage
from .weightmap import line_skip_keep_indices


@dataclass(frozen=True)
class BilinearScale:
    """Out-camera bilinear scaling of the demosaiced image."""

    factor: Fraction = Fraction(1, 2)


@dataclass(frozen=True)
class Binning:
    """In-camera k x k same-color binning before demosaicing."""

    k: int = 2
    phase: tuple = (0, 0)

    def __post_init__(self):
        if self.k not in (2, 3, 4):
            raise ValueError("binning supports k in {2, 3, 4}")
        if tuple(self.phase) not in {(0, 0), (0, 1), (1, 0), (1, 1)}:
            raise ValueError("binning phase must be (0|1, 0|1)")


@dataclass(frozen=True)
class LineSkip:
    """In-camera 2-of-4 row/column skipping before demosaicing."""

    row_phase: int = 0
    col_phase: int = 0

    def __post_init__(self):
        if self.row_phase not in range(4) or self.col_phase not in range(4):
            raise ValueError("line-skip phases lie in 0..3")


def bin_mosaic(samples, k, phase=(0, 0)):
    """k x k same-color binning of a mosaic array -> 1/k mosaic array.

    A nonzero phase first drops 2*phase rows/columns from the top/left (an
    even shift, so the Bayer pattern is preserved) and bins the largest
    region that still tiles into 2k x 2k blocks.
    """
    s = np.asarray(samples, dtype=np.float64)
    pr, pc = phase
    s = s[2 * pr:, 2 * pc:]
    h = s.shape[0] // (2 * k) * (2 * k)
    w = s.shape[1] // (2 * k) * (2 * k)
    if h == 0 or w == 0:
        raise ValueError("frame too small for requested binning")
    s = s[:h, :w]
    out = np.empty((h // k, w // k))
    for pi in (0, 1):
        for pj in (0, 1):
            grid = s[pi::2, pj::2]
            blocks = grid.reshape(h // (2 * k), k, w // (2 * k), k)
            out[pi::2, pj::2] = blocks.mean(axis=(1, 3))
    return out


def bin_raw(raw, k, phase=(0, 0)):
    """Binning on a RawFrame; phase (0,0) requires dims divisible by 2k."""
    if phase == (0, 0) and (raw.shape[0] % (2 * k) or raw.shape[1] % (2 * k)):
        raise ValueError(f"binning k={k} needs dimensions divisible by {2 * k}")
    return RawFrame(bin_mosaic(raw.samples, k, phase), raw.pattern, (0, 0, 0, 0))


def line_skip_mosaic(samples, row_phase=0, col_phase=0):
    s = np.asarray(samples, dtype=np.float64)
    rows = line_skip_keep_indices(s.shape[0], row_phase)
    cols = line_skip_keep_indices(s.shape[1], col_phase)
    return s[np.ix_(rows, cols)]


def line_skip(raw, row_phase=0, col_phase=0):
    """Line-skipping on a RawFrame; dims must be divisible by 4."""
    if raw.shape[0] % 4 or raw.shape[1] % 4:
        raise ValueError("line skipping needs dimensions divisible by 4")
    rows = line_skip_keep_indices(raw.shape[0], row_phase)
    cols = line_skip_keep_indices(raw.shape[1], col_phase)
    pattern = raw.pattern.shifted(rows[0], cols[0])
    return RawFrame(raw.samples[np.ix_(rows, cols)], pattern, (0, 0, 0, 0))


def box_downscale_plane(a, k):
    """1/k box-average downscaling of a 2-D array (the analysis kernel)."""
    a = np.asarray(a, dtype=np.float64)
    h = a.shape[0] // k * k
    w = a.shape[1] // k * k
    return a[:h, :w].reshape(h // k, k, w // k, k).mean(axis=(1, 3))


def _axis_taps(out_size, in_size, factor):
    dst = np.arange(out_size)
    src = (dst + 0.5) / float(factor) - 0.5
    i0 = np.floor(src).astype(int)
    frac = src - i0
    i1 = np.clip(i0 + 1, 0, in_size - 1)
    i0 = np.clip(i0, 0, in_size - 1)
    return i0, i1, frac


def bilinear_scale_plane(a, factor, out_shape=None):
    """Separable bilinear resampling, src = (dst + 0.5) / factor - 0.5.

    out_shape overrides the default floor(factor * dims) output size.
    """
    a = np.asarray(a, dtype=np.float64)
    if out_shape is None:
        out_shape = (int(a.shape[0] * Fraction(factor)), int(a.shape[1] * Fraction(factor)))
    out_h, out_w = out_shape
    if out_h < 1 or out_w < 1:
        raise ValueError("scale factor produces an empty image")
    r0, r1, fr = _axis_taps(out_h, a.shape[0], factor)
    c0, c1, fc = _axis_taps(out_w, a.shape[1], factor)
    # interpolate columns once, then rows
    cols = a[:, c0] * (1 - fc) + a[:, c1] * fc
    return cols[r0] * (1 - fr[:, None]) + cols[r1] * fr[:, None]


def bilinear_scale(img, factor):
    """Bilinear scaling of an RgbImage by a factor in (0, 1]."""
    factor = Fraction(factor)
    if not 0 < factor <= 1:
        raise ValueError("scale factor must lie in (0, 1]")
    planes = [bilinear_scale_plane(img.plane(c), factor) for c in range(3)]
    return RgbImage(np.stack(planes, axis=-1))


def box_downscale(img, k):
    planes = [box_downscale_plane(img.plane(c), k) for c in range(3)]
    return RgbImage(np.stack(planes, axis=-1))


def crop_center_plane(a, height, width):
    h, w = a.shape[:2]
    if height > h or width > w:
        raise ValueError("crop larger than source")
    top = (h - height) // 2
    left = (w - width) // 2
    return a[top:top + height, left:left + width]


def boundary_crop_amounts(height, width, rows, preserve_aspect=True):
    """Rows/columns removed per side by the boundary-pixel crop."""
    if 2 * rows >= height:
        raise ValueError("boundary crop exceeds frame height")
    cols = int(round(rows * width / height)) if preserve_aspect else 0
    if 2 * cols >= width:
        raise ValueError("boundary crop exceeds frame width")
    return rows, cols


def crop_boundary_plane(a, rows, preserve_aspect=True):
    a = np.asarray(a, dtype=np.float64)
    rows, cols = boundary_crop_amounts(a.shape[0], a.shape[1], rows, preserve_aspect)
    h, w = a.shape[:2]
    return a[rows:h - rows if rows else h, cols:w - cols if cols else w]


def crop_boundary(img, rows, preserve_aspect=True):
    """Remove `rows` from top and bottom and, when preserve_aspect is set,
    enough columns per side to keep the output aspect within a pixel of the
    input aspect."""
    rows_, cols = boundary_crop_amounts(img.height, img.width, rows, preserve_aspect)
    h, w = img.height, img.width
    data = img.data[rows_:h - rows_ if rows_ else h, cols:w - cols if cols else w, :]
    return RgbImage(data.copy())
