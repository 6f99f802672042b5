"""Ratio of Alignment between resizing pipelines.

The alignment of two output pixels is the summed minimum weight over raw
sensor sites shared by their weight lists; plane RoA averages this over
pixels and the combined RoA weights the planes 0.3 / 0.6 / 0.1.
"""

from dataclasses import dataclass
from fractions import Fraction

from .bayer import B, G, R

PLANE_WEIGHTS = (Fraction(3, 10), Fraction(6, 10), Fraction(1, 10))

# Closed-form values for half-resolution pipelines (2-decimal published form).
ANALYTIC_ROA_TABLE = {
    ("bscale", "bscale"): 1.00, ("bscale", "bin"): 0.46, ("bscale", "lskip"): 0.17,
    ("bin", "bscale"): 0.46, ("bin", "bin"): 1.00, ("bin", "lskip"): 0.21,
    ("lskip", "bscale"): 0.17, ("lskip", "bin"): 0.21, ("lskip", "lskip"): 1.00,
}

# k x k binning vs 1/k bilinear scaling: (upper bound, actual), 2 decimals.
ANALYTIC_BINNING_SERIES = {2: (0.53, 0.46), 3: (0.31, 0.22), 4: (0.25, 0.14)}

TECHNIQUES = ("bscale", "bin", "lskip")


@dataclass(frozen=True)
class PixelAlignment:
    value: Fraction

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError("alignment must lie in [0, 1]")


@dataclass(frozen=True)
class RoaReport:
    a_r: Fraction
    a_g: Fraction
    a_b: Fraction

    @property
    def combined(self):
        wr, wg, wb = PLANE_WEIGHTS
        return wr * self.a_r + wg * self.a_g + wb * self.a_b

    def as_floats(self):
        return (float(self.a_r), float(self.a_g), float(self.a_b), float(self.combined))


def _as_weight_dict(weights):
    if isinstance(weights, dict):
        return weights
    return {(r, c): Fraction(w) for r, c, w in weights}


def pixel_alignment(wa, wb):
    """Summed minimum weight over raw sites common to both lists.

    Accepts dicts {(r, c): weight} or iterables of (r, c, weight); each
    list's weights must sum to 1.
    """
    wa = _as_weight_dict(wa)
    wb = _as_weight_dict(wb)
    for wl in (wa, wb):
        total = sum(Fraction(w) for w in wl.values())
        if total != 1:
            raise ValueError(f"weight list is not normalized (sum={total})")
    acc = Fraction(0)
    for site, w in wa.items():
        if site in wb:
            acc += min(Fraction(w), Fraction(wb[site]))
    return PixelAlignment(acc)


def roa(map_a, map_b, border=2):
    """RoA between two WeightMaps with identical output dimensions.

    A `border`-pixel frame is excluded so edge handling never contaminates
    comparison with the interior-case analytic values.
    """
    if (map_a.out_height, map_a.out_width) != (map_b.out_height, map_b.out_width):
        raise ValueError("weight maps have different output dimensions")
    h, w = map_a.out_height, map_a.out_width
    if h <= 2 * border or w <= 2 * border:
        raise ValueError("output too small for the interior exclusion border")
    per_plane = []
    n = (h - 2 * border) * (w - 2 * border)
    for c in (R, G, B):
        acc = Fraction(0)
        pa, pb = map_a.planes[c], map_b.planes[c]
        for i in range(border, h - border):
            for j in range(border, w - border):
                wa, wb = pa[(i, j)], pb[(i, j)]
                s = Fraction(0)
                for site, wv in wa.items():
                    if site in wb:
                        s += min(wv, wb[site])
                acc += s
        per_plane.append(acc / n)
    return RoaReport(*per_plane)


def analytic_roa_table():
    """Published closed-form RoA matrix for the three half-res techniques,
    plus the k x k binning vs 1/k bilinear series."""
    return dict(ANALYTIC_ROA_TABLE), dict(ANALYTIC_BINNING_SERIES)
