"""Capture-pipeline descriptions: symbolic composition and concrete execution.

A pipeline is an ordered list of steps applied to a raw sensor frame.
Binning, line-skipping and mosaic crops happen before demosaicing; scaling
and RGB crops after, mirroring how cameras order these operations.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import resize
from .bayer import RawFrame, RgbImage, demosaic_planes
from .weightmap import (WeightMap, bin_mosaic_map, crop_mosaic_map, crop_planes,
                        demosaic_map, identity_mosaic_map, line_skip_mosaic_map,
                        scale_planes)


class PipelineError(ValueError):
    """Raised for ill-ordered or malformed pipelines."""


@dataclass(frozen=True)
class CropStep:
    top: int
    left: int
    height: int
    width: int


@dataclass(frozen=True)
class BinStep:
    k: int
    phase: tuple = (0, 0)


@dataclass(frozen=True)
class LineSkipStep:
    row_phase: int = 0
    col_phase: int = 0


@dataclass(frozen=True)
class DemosaicStep:
    pass


@dataclass(frozen=True)
class ScaleStep:
    factor: Fraction
    kernel: str = "box"  # 'box' (analysis kernel) or 'bilinear' (resampler)

    def __post_init__(self):
        object.__setattr__(self, "factor", Fraction(self.factor))
        if self.kernel not in ("box", "bilinear"):
            raise PipelineError(f"unknown scale kernel {self.kernel!r}")


def validate_steps(steps):
    """Demosaic exactly once; bin/line-skip only before it, scaling after."""
    n_dem = sum(isinstance(s, DemosaicStep) for s in steps)
    if n_dem != 1:
        raise PipelineError("pipeline must contain exactly one demosaic step")
    seen_dem = False
    for s in steps:
        if isinstance(s, DemosaicStep):
            seen_dem = True
        elif isinstance(s, (BinStep, LineSkipStep)) and seen_dem:
            raise PipelineError("binning/line-skipping must precede demosaicing")
        elif isinstance(s, ScaleStep) and not seen_dem:
            raise PipelineError("scaling must follow demosaicing")


def compose_pipeline(raw_shape, pattern, steps):
    """Symbolic end-to-end WeightMap from raw sensor sites to output pixels."""
    validate_steps(steps)
    h, w = raw_shape
    mosaic = identity_mosaic_map(h, w, pattern)
    planes = None
    out_h = out_w = None
    for s in steps:
        if isinstance(s, BinStep):
            if s.phase != (0, 0):
                mosaic = crop_mosaic_map(mosaic, 2 * s.phase[0], 2 * s.phase[1],
                                         (mosaic.height - 2 * s.phase[0]) // (2 * s.k) * (2 * s.k),
                                         (mosaic.width - 2 * s.phase[1]) // (2 * s.k) * (2 * s.k))
            mosaic = bin_mosaic_map(mosaic, s.k)
        elif isinstance(s, LineSkipStep):
            mosaic = line_skip_mosaic_map(mosaic, s.row_phase, s.col_phase)
        elif isinstance(s, CropStep):
            if planes is None:
                mosaic = crop_mosaic_map(mosaic, s.top, s.left, s.height, s.width)
            else:
                planes = crop_planes(planes, s.top, s.left, s.height, s.width)
                out_h, out_w = s.height, s.width
        elif isinstance(s, DemosaicStep):
            planes = demosaic_map(mosaic)
            out_h, out_w = mosaic.height, mosaic.width
        elif isinstance(s, ScaleStep):
            planes, out_h, out_w = scale_planes(planes, out_h, out_w, s.factor, s.kernel)
        else:
            raise PipelineError(f"unknown step {s!r}")
    return WeightMap(out_h, out_w, planes, raw_shape)


def run_pipeline(raw, steps):
    """Execute the pipeline concretely on a RawFrame -> RgbImage."""
    validate_steps(steps)
    mosaic = raw.samples
    pattern = raw.pattern
    rgb = None
    for s in steps:
        if isinstance(s, BinStep):
            mosaic = resize.bin_mosaic(mosaic, s.k, s.phase)
        elif isinstance(s, LineSkipStep):
            from .weightmap import line_skip_keep_indices
            rows = line_skip_keep_indices(mosaic.shape[0], s.row_phase)
            cols = line_skip_keep_indices(mosaic.shape[1], s.col_phase)
            mosaic = mosaic[np.ix_(rows, cols)]
            pattern = pattern.shifted(rows[0], cols[0])
        elif isinstance(s, CropStep):
            if rgb is None:
                mosaic = mosaic[s.top:s.top + s.height, s.left:s.left + s.width]
                pattern = pattern.shifted(s.top, s.left)
            else:
                rgb = rgb[s.top:s.top + s.height, s.left:s.left + s.width, :]
        elif isinstance(s, DemosaicStep):
            rgb = demosaic_planes(mosaic, pattern)
        elif isinstance(s, ScaleStep):
            if s.kernel == "box":
                k = (1 / s.factor)
                if k.denominator != 1:
                    raise PipelineError("box scaling requires factor = 1/k")
                rgb = np.stack([resize.box_downscale_plane(rgb[:, :, c], int(k))
                                for c in range(3)], axis=-1)
            else:
                rgb = np.stack([resize.bilinear_scale_plane(rgb[:, :, c], s.factor)
                                for c in range(3)], axis=-1)
        else:
            raise PipelineError(f"unknown step {s!r}")
    return RgbImage(rgb)


# --- line-oriented text grammar ----------------------------------------------
#
#   crop top=0 left=0 height=64 width=64
#   bin k=2 phase=0,0
#   lskip phase=0,0
#   demosaic
#   bscale factor=1/2 kernel=box
#
# '#' starts a comment; blank lines are ignored.


def _kv(tokens):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise PipelineError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def parse_pipeline(text):
    steps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, *rest = line.split()
        kv = _kv(rest)
        try:
            if name == "crop":
                steps.append(CropStep(int(kv["top"]), int(kv["left"]),
                                      int(kv["height"]), int(kv["width"])))
            elif name == "bin":
                pr, pc = (kv.get("phase", "0,0").split(","))
                steps.append(BinStep(int(kv["k"]), (int(pr), int(pc))))
            elif name == "lskip":
                pr, pc = (kv.get("phase", "0,0").split(","))
                steps.append(LineSkipStep(int(pr), int(pc)))
            elif name == "demosaic":
                steps.append(DemosaicStep())
            elif name == "bscale":
                steps.append(ScaleStep(Fraction(kv["factor"]), kv.get("kernel", "box")))
            else:
                raise PipelineError(f"unknown step {name!r}")
        except (KeyError, ValueError) as exc:
            raise PipelineError(f"line {lineno}: {exc}") from exc
    return steps


def format_pipeline(steps):
    lines = []
    for s in steps:
        if isinstance(s, CropStep):
            lines.append(f"crop top={s.top} left={s.left} height={s.height} width={s.width}")
        elif isinstance(s, BinStep):
            lines.append(f"bin k={s.k} phase={s.phase[0]},{s.phase[1]}")
        elif isinstance(s, LineSkipStep):
            lines.append(f"lskip phase={s.row_phase},{s.col_phase}")
        elif isinstance(s, DemosaicStep):
            lines.append("demosaic")
        elif isinstance(s, ScaleStep):
            lines.append(f"bscale factor={s.factor} kernel={s.kernel}")
        else:
            raise PipelineError(f"unknown step {s!r}")
    return "\n".join(lines) + "\n"


# canonical half-resolution capture pipelines used throughout the analysis
def half_res_steps(technique):
    """Steps resizing a raw frame to half resolution via one technique.

    technique: 'bscale', 'bin' or 'lskip'.
    """
    if technique == "bscale":
        return [DemosaicStep(), ScaleStep(Fraction(1, 2), "box")]
    if technique == "bin":
        return [BinStep(2), DemosaicStep()]
    if technique == "lskip":
        return [LineSkipStep(0, 0), DemosaicStep()]
    raise PipelineError(f"unknown technique {technique!r}")


def one_over_k_steps(technique, k):
    """Steps resizing a raw frame to 1/k resolution via one technique."""
    if technique == "bscale":
        return [DemosaicStep(), ScaleStep(Fraction(1, k), "bilinear")]
    if technique == "bin":
        return [BinStep(k), DemosaicStep()]
    raise PipelineError(f"unknown technique {technique!r} for 1/k pipelines")
