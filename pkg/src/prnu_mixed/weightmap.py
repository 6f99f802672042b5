"""Sparse per-pixel weight maps from raw sensor sites to output pixels.

A weight map records, for every output pixel and color, which raw sensor
sites contribute and with what weight.  Weights are exact rationals
(fractions.Fraction) so that alignment ratios such as 29/64 come out exact.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bayer import B, G, R, mirror_index

ONE = Fraction(1)


def _check_normalized(weights, where=""):
    total = sum(weights.values(), Fraction(0))
    if total != 1:
        raise ValueError(f"weight list does not sum to 1 {where}(sum={total})")
    if any(w < 0 for w in weights.values()):
        raise ValueError(f"negative weight {where}")


@dataclass(frozen=True)
class MosaicWeightMap:
    """Map from raw sensor sites to the sites of a (possibly resized) mosaic.

    entries[(i, j)] is a dict {(raw_row, raw_col): Fraction}.
    """

    height: int
    width: int
    pattern: "BayerPattern"
    entries: dict

    def weights(self, i, j):
        return self.entries[(i, j)]


class WeightMap:
    """Map from raw sensor sites to the pixels of a 3-plane RGB output.

    planes[c][(i, j)] is a dict {(raw_row, raw_col): Fraction} for channel c.
    """

    def __init__(self, out_height, out_width, planes, raw_shape, validate=True):
        self.out_height = out_height
        self.out_width = out_width
        self.planes = planes
        self.raw_shape = raw_shape
        if validate:
            self.validate()

    def weights(self, i, j, channel):
        """Sorted list of (raw_row, raw_col, weight) for one output pixel."""
        d = self.planes[channel][(i, j)]
        return [(r, c, w) for (r, c), w in sorted(d.items())]

    def validate(self):
        m, n = self.raw_shape
        for c in (R, G, B):
            for (i, j), wl in self.planes[c].items():
                _check_normalized(wl, where=f"at pixel ({i},{j}) ch {c} ")
                for (r, cc) in wl:
                    if not (0 <= r < m and 0 <= cc < n):
                        raise ValueError(f"raw index ({r},{cc}) outside {m}x{n}")

    def apply(self, samples):
        """Apply the map to a raw sample array -> (H, W, 3) float array."""
        samples = np.asarray(samples, dtype=np.float64)
        out = np.zeros((self.out_height, self.out_width, 3))
        for c in (R, G, B):
            for (i, j), wl in self.planes[c].items():
                out[i, j, c] = sum(float(w) * samples[r, cc] for (r, cc), w in wl.items())
        return out


def identity_mosaic_map(height, width, pattern):
    entries = {(i, j): {(i, j): ONE} for i in range(height) for j in range(width)}
    return MosaicWeightMap(height, width, pattern, entries)


def _combine(contribs, source_entries):
    """Expand {site: w} through a source map {site: {raw: w2}}."""
    out = {}
    for site, w in contribs.items():
        for raw, w2 in source_entries[site].items():
            out[raw] = out.get(raw, Fraction(0)) + w * w2
    return out


def bin_mosaic_map(src, k):
    """k x k same-color binning of a mosaic map; output is a 1/k mosaic.

    Requires dimensions divisible by 2k.  Output site (i, j) is the unweighted
    mean of the k x k same-parity sites of its 2x2-block neighborhood.
    """
    if src.height % (2 * k) or src.width % (2 * k):
        raise ValueError(f"binning k={k} needs dimensions divisible by {2 * k}")
    out_h, out_w = src.height // k, src.width // k
    wk = Fraction(1, k * k)
    entries = {}
    for i in range(out_h):
        bi, pi = divmod(i, 2)
        for j in range(out_w):
            bj, pj = divmod(j, 2)
            contribs = {}
            for t in range(k):
                rr = 2 * (k * bi + t) + pi
                for u in range(k):
                    cc = 2 * (k * bj + u) + pj
                    contribs[(rr, cc)] = wk
            entries[(i, j)] = _combine(contribs, src.entries)
    return MosaicWeightMap(out_h, out_w, src.pattern, entries)


def line_skip_keep_indices(n, phase):
    """Indices kept when skipping 2 of every 4 lines with the given phase.

    phase p keeps index x iff (x - p) mod 4 in {0, 1}.  Phase 0 keeps the 1st
    and 2nd of every 4 lines (the canonical convention).
    """
    return [x for x in range(n) if (x - phase) % 4 < 2]


def line_skip_mosaic_map(src, row_phase, col_phase):
    """Keep 2-of-every-4 rows and columns; output is a half-size mosaic."""
    if src.height % 4 or src.width % 4:
        raise ValueError("line skipping needs dimensions divisible by 4")
    rows = line_skip_keep_indices(src.height, row_phase)
    cols = line_skip_keep_indices(src.width, col_phase)
    pattern = src.pattern.shifted(rows[0], cols[0])
    entries = {}
    for i, rr in enumerate(rows):
        for j, cc in enumerate(cols):
            entries[(i, j)] = dict(src.entries[(rr, cc)])
    return MosaicWeightMap(len(rows), len(cols), pattern, entries)


def crop_mosaic_map(src, top, left, height, width):
    if top < 0 or left < 0 or top + height > src.height or left + width > src.width:
        raise ValueError("crop window outside mosaic")
    entries = {(i, j): dict(src.entries[(top + i, left + j)])
               for i in range(height) for j in range(width)}
    return MosaicWeightMap(height, width, src.pattern.shifted(top, left), entries)


def demosaic_contributors(pattern, height, width, i, j, channel):
    """Mosaic sites and weights the bilinear demosaic uses for one output.

    Interior pixels reproduce the four parity cases of plain bilinear CFA
    interpolation; edge neighbors are mirror-reflected (parity preserving).
    """
    site_color = pattern.color_at0(i, j)
    if site_color == channel:
        return {(i, j): ONE}
    if channel == G:
        offsets = [(-1, 0), (1, 0), (0, -1), (0, 1)]
        w = Fraction(1, 4)
    else:
        pr, pc = pattern.channel_parity(channel)
        if i % 2 == pr:  # same row parity as target sites: horizontal pair
            offsets = [(0, -1), (0, 1)]
            w = Fraction(1, 2)
        elif j % 2 == pc:  # same column parity: vertical pair
            offsets = [(-1, 0), (1, 0)]
            w = Fraction(1, 2)
        else:  # diagonal quad
            offsets = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
            w = Fraction(1, 4)
    out = {}
    for dr, dc in offsets:
        site = (mirror_index(i + dr, height), mirror_index(j + dc, width))
        out[site] = out.get(site, Fraction(0)) + w
    return out


def demosaic_map(src):
    """Demosaic a mosaic map into a 3-plane WeightMap over raw sites."""
    planes = [{}, {}, {}]
    for c in (R, G, B):
        for i in range(src.height):
            for j in range(src.width):
                contribs = demosaic_contributors(src.pattern, src.height, src.width, i, j, c)
                planes[c][(i, j)] = _combine(contribs, src.entries)
    # raw shape: take any source entry's span from the original identity map;
    # callers pass it through compose_pipeline, which knows the raw dims.
    return planes


def _axis_scale_taps(out_size, in_size, factor, kernel):
    """Per-output-index list of (input index, weight) along one axis."""
    taps = []
    if kernel == "box":
        k = Fraction(1, 1) / factor
        if k.denominator != 1:
            raise ValueError("box kernel requires factor = 1/k")
        k = k.numerator
        w = Fraction(1, k)
        for d in range(out_size):
            taps.append([(k * d + t, w) for t in range(k)])
    elif kernel == "bilinear":
        for d in range(out_size):
            src = (Fraction(d) + Fraction(1, 2)) / factor - Fraction(1, 2)
            i0 = src.numerator // src.denominator  # floor
            frac = src - i0
            pairs = {}
            for idx, w in ((i0, 1 - frac), (i0 + 1, frac)):
                if w == 0:
                    continue
                idx = min(max(idx, 0), in_size - 1)
                pairs[idx] = pairs.get(idx, Fraction(0)) + w
            taps.append(sorted(pairs.items()))
    else:
        raise ValueError(f"unknown scale kernel {kernel!r}")
    return taps


def scale_planes(planes, in_h, in_w, factor, kernel="box"):
    """Separable downscaling of a 3-plane map by a rational factor in (0, 1].

    kernel 'box': 1/k box averaging (the analysis kernel; at 1/2 it is the
    2x2 averaging kernel).  kernel 'bilinear': coordinate-mapped separable
    bilinear resampling, src = (dst + 0.5) / factor - 0.5.
    """
    factor = Fraction(factor)
    if not 0 < factor <= 1:
        raise ValueError("scale factor must lie in (0, 1]")
    out_h = int(in_h * factor)
    out_w = int(in_w * factor)
    row_taps = _axis_scale_taps(out_h, in_h, factor, kernel)
    col_taps = _axis_scale_taps(out_w, in_w, factor, kernel)
    out = [{}, {}, {}]
    for c in (R, G, B):
        src = planes[c]
        for i in range(out_h):
            for j in range(out_w):
                acc = {}
                for rr, wr in row_taps[i]:
                    for cc, wc in col_taps[j]:
                        w = wr * wc
                        for raw, w2 in src[(rr, cc)].items():
                            acc[raw] = acc.get(raw, Fraction(0)) + w * w2
                out[c][(i, j)] = acc
    return out, out_h, out_w


def crop_planes(planes, top, left, height, width):
    out = [{}, {}, {}]
    for c in (R, G, B):
        for i in range(height):
            for j in range(width):
                out[c][(i, j)] = dict(planes[c][(top + i, left + j)])
    return out
