"""Bayer color filter array model, raw sensor frames and bilinear demosaicing."""

import struct
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.ndimage import convolve

R, G, B = 0, 1, 2
CHANNEL_NAMES = ("R", "G", "B")

# Red/blue interpolation kernel and green interpolation kernel.  Applied to
# the sparse per-color planes (zeros at foreign sites) these reproduce plain
# bilinear CFA interpolation: co-sited weight 1, row/col neighbors 1/2,
# diagonal neighbors 1/4.
KERNEL_RB = np.array([[1, 2, 1],
                      [2, 4, 2],
                      [1, 2, 1]], dtype=np.float64) / 4.0
KERNEL_G = np.array([[0, 1, 0],
                     [1, 4, 1],
                     [0, 1, 0]], dtype=np.float64) / 4.0


class BayerPattern(Enum):
    """2x2-periodic CFA layouts. Value is the ((r0c0, r0c1), (r1c0, r1c1)) cell."""

    RGGB = ((R, G), (G, B))
    BGGR = ((B, G), (G, R))
    GRBG = ((G, R), (B, G))
    GBRG = ((G, B), (R, G))

    def color_at0(self, row, col):
        """Channel index at 0-based (row, col)."""
        return self.value[row % 2][col % 2]

    def channel_parity(self, channel):
        """(row%2, col%2) of the sites carrying `channel`. Not defined for G."""
        if channel == G:
            raise ValueError("green occupies two parities per cell")
        for pr in (0, 1):
            for pc in (0, 1):
                if self.value[pr][pc] == channel:
                    return (pr, pc)
        raise AssertionError("channel missing from pattern")

    def shifted(self, drow, dcol):
        """Pattern observed when the origin moves by (drow, dcol)."""
        cell = ((self.value[drow % 2][dcol % 2], self.value[drow % 2][(dcol + 1) % 2]),
                (self.value[(drow + 1) % 2][dcol % 2], self.value[(drow + 1) % 2][(dcol + 1) % 2]))
        for pat in BayerPattern:
            if pat.value == cell:
                return pat
        raise AssertionError("every 2x2 shift of a Bayer cell is a Bayer cell")

    def mask(self, channel, height, width):
        """Boolean (height, width) mask of the sites carrying `channel`."""
        rows = np.arange(height)[:, None] % 2
        cols = np.arange(width)[None, :] % 2
        cell = np.array(self.value)
        return cell[rows, cols] == channel


def color_at(pattern, row, col):
    """Channel name ('R'/'G'/'B') at 1-based (row, col), mirroring the usual
    1-based CFA indexing convention."""
    if row < 1 or col < 1:
        raise ValueError("color_at uses 1-based indices")
    return CHANNEL_NAMES[pattern.color_at0(row - 1, col - 1)]


def mirror_index(i, n):
    """Reflect an out-of-range index back into [0, n).

    Reflection is about the edge sample (no repeat), so parity is preserved
    and a reflected CFA site keeps its color.
    """
    if i < 0:
        i = -i
    if i >= n:
        i = 2 * n - 2 - i
    if not 0 <= i < n:
        raise ValueError("index out of reflectable range")
    return i


@dataclass(frozen=True)
class RawFrame:
    """Single-channel Bayer mosaic (raw sensor output).

    samples: (M, N) float array, linear intensities in [0, 1].
    active_boundary: (top, bottom, left, right) margins; the active image is
    the frame minus these margins.
    """

    samples: np.ndarray
    pattern: BayerPattern = BayerPattern.RGGB
    active_boundary: tuple = (0, 0, 0, 0)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", s)
        m, n = s.shape
        if m < 4 or n < 4 or m % 2 or n % 2:
            raise ValueError(f"raw frame must be even and at least 4x4, got {m}x{n}")
        if not np.all(np.isfinite(s)):
            raise ValueError("raw samples must be finite")
        if s.min() < 0.0 or s.max() > 1.0:
            raise ValueError("raw samples must lie in [0, 1]")
        t, b, l, r = self.active_boundary
        if min(t, b, l, r) < 0 or max(t, b) >= m // 2 or max(l, r) >= n // 2:
            raise ValueError("active boundary margins out of range")
        s.setflags(write=False)

    @property
    def shape(self):
        return self.samples.shape

    def active_image(self):
        """RawFrame restricted to the active image region."""
        t, b, l, r = self.active_boundary
        if (t, b, l, r) == (0, 0, 0, 0):
            return self
        m, n = self.shape
        sub = self.samples[t:m - b, l:n - r]
        return RawFrame(sub.copy(), self.pattern.shifted(t, l), (0, 0, 0, 0))


@dataclass(frozen=True)
class RgbImage:
    """Full-color image: (H, W, 3) float array, channels R, G, B."""

    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=np.float64)
        if d.ndim != 3 or d.shape[2] != 3:
            raise ValueError("RgbImage expects an (H, W, 3) array")
        if not np.all(np.isfinite(d)):
            raise ValueError("RgbImage values must be finite")
        object.__setattr__(self, "data", d)
        d.setflags(write=False)

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def width(self):
        return self.data.shape[1]

    def plane(self, channel):
        return self.data[:, :, channel]


def demosaic_planes(samples, pattern):
    """Bilinear CFA interpolation of a mosaic array -> (H, W, 3) array.

    Out-of-frame neighbors are taken by mirror reflection about the edge
    sample, which preserves CFA parity, so every output weight list still
    sums to 1.
    """
    samples = np.asarray(samples, dtype=np.float64)
    h, w = samples.shape
    out = np.empty((h, w, 3), dtype=np.float64)
    for ch, kernel in ((R, KERNEL_RB), (G, KERNEL_G), (B, KERNEL_RB)):
        sparse = np.where(pattern.mask(ch, h, w), samples, 0.0)
        out[:, :, ch] = convolve(sparse, kernel, mode="mirror")
    return out


def demosaic_bilinear(raw):
    """Demosaic a RawFrame into an RgbImage of the same dimensions."""
    return RgbImage(demosaic_planes(raw.samples, raw.pattern))


# --- raw frame binary format ------------------------------------------------
#
# 16-byte header, little endian:
#   bytes 0-3   magic b"PRAW"
#   bytes 4-5   M (rows, uint16)
#   bytes 6-7   N (cols, uint16)
#   byte  8     pattern id (0=RGGB, 1=BGGR, 2=GRBG, 3=GBRG)
#   byte  9     reserved (0)
#   bytes 10-13 boundary margins top, bottom, left, right (uint8 each)
#   bytes 14-15 reserved (0)
# followed by M*N row-major float32 samples.

RAW_MAGIC = b"PRAW"
_RAW_HEADER = struct.Struct("<4sHHBB4BH")
_PATTERN_IDS = {BayerPattern.RGGB: 0, BayerPattern.BGGR: 1,
                BayerPattern.GRBG: 2, BayerPattern.GBRG: 3}
_PATTERN_FROM_ID = {v: k for k, v in _PATTERN_IDS.items()}


def write_raw_frame(path, raw):
    m, n = raw.shape
    t, b, l, r = raw.active_boundary
    header = _RAW_HEADER.pack(RAW_MAGIC, m, n, _PATTERN_IDS[raw.pattern], 0,
                              t, b, l, r, 0)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(raw.samples.astype("<f4").tobytes())


def read_raw_frame(path):
    with open(path, "rb") as fh:
        header = fh.read(_RAW_HEADER.size)
        if len(header) != _RAW_HEADER.size:
            raise ValueError("truncated raw frame header")
        magic, m, n, pat_id, _, t, b, l, r, _ = _RAW_HEADER.unpack(header)
        if magic != RAW_MAGIC:
            raise ValueError("bad raw frame magic")
        if pat_id not in _PATTERN_FROM_ID:
            raise ValueError(f"unknown pattern id {pat_id}")
        payload = fh.read(4 * m * n)
        if len(payload) != 4 * m * n:
            raise ValueError("truncated raw frame payload")
    samples = np.frombuffer(payload, dtype="<f4").reshape(m, n).astype(np.float64)
    return RawFrame(samples, _PATTERN_FROM_ID[pat_id], (t, b, l, r))
