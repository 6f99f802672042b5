"""Image-to-video fingerprint attribution.

Algorithm outline (per match attempt):
  1. crop boundary rows/columns off the video fingerprint (some cameras use
     extra sensor area only for video, which would misalign the two FEs);
  2. pick a resizing technique: bilinear scaling first, 2x2 binning phases
     as fallback;
  3. compute the admissible factor range and 4. the ordered hypothesis
     schedule; 5. correlate each hypothesis and accept the first whose PCE
     at the NCC peak exceeds tau.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .prnu import Fingerprint, ncc_surface, peak_location, pce
from .resize import bilinear_scale_plane, bin_mosaic, crop_boundary_plane
from .search import (MediaDims, hypothesis_schedule, implied_cropping_ratio,
                     search_range, DEFAULT_MAX_CROP_RATIO)

DEFAULT_TAU = 60.0
DEFAULT_BOUNDARY_ROWS = 20
BIN_PHASES = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class ResizeHypothesis:
    technique: str  # 'bscale' or 'bin'
    factor: float
    phase: tuple = None  # binning phase when technique == 'bin'


@dataclass(frozen=True)
class MatchConfig:
    tau: float = DEFAULT_TAU
    boundary_rows: int = DEFAULT_BOUNDARY_ROWS
    max_crop_ratio: float = DEFAULT_MAX_CROP_RATIO
    techniques: tuple = ("bscale", "bin")
    exhaustive: bool = False
    bin_ks: tuple = (2,)  # k=3,4 available for research use
    skip_boundary_crop: bool = False  # ablation switch for step 1
    pce_window: int = 11
    r1: object = None
    sensor_aspect: object = None


@dataclass(frozen=True)
class MatchReport:
    decision: str  # 'match' or 'no_match'
    best_pce: float
    winning: ResizeHypothesis
    peak_offset: tuple
    hypotheses_tried: int
    wall_time: float
    reason: str = ""


def _as_plane(fe):
    return fe.plane if isinstance(fe, Fingerprint) else np.asarray(fe, dtype=np.float64)


def _correlate_pair(a, b, window, fft_cache=None):
    """NCC of the smaller plane inside the larger + PCE at the peak.

    Returns (pce value, offset of b-plane relative to a-plane) or None when
    no orientation yields a surface that can host the exclusion window.
    """
    ha, wa = a.shape
    hb, wb = b.shape
    mode = "valid" if ((hb <= ha and wb <= wa) or (ha <= hb and wa <= wb)) else "full"
    swap = ha < hb or (mode == "full" and a.size < b.size)
    search_img, template = (b, a) if swap else (a, b)
    if mode == "valid" and (search_img.shape[0] - template.shape[0] < window - 1
                            or search_img.shape[1] - template.shape[1] < window - 1):
        # valid-mode surface too small to host the exclusion window; the
        # zero-background full surface is always big enough
        mode = "full"
    # the cached template spectra are only valid for the fixed b plane
    surface = ncc_surface(search_img, template, mode=mode,
                          fft_cache=None if swap else fft_cache)
    if surface.shape[0] < window or surface.shape[1] < window:
        return None
    peak = peak_location(surface)
    value = pce(surface, peak=peak, window=window)
    off = tuple(int(x) for x in peak)
    if mode == "full":
        off = (off[0] - template.shape[0] + 1, off[1] - template.shape[1] + 1)
    if swap:
        off = (-off[0], -off[1])
    return float(value), off


def _scaled_dims(shape, factor):
    return (max(1, int(round(shape[0] * factor))), max(1, int(round(shape[1] * factor))))


def _image_variants(image_plane, technique, config):
    """(phase, plane, pre_factor) source planes for one technique."""
    if technique == "bscale":
        return [(None, image_plane, 1.0)]
    if technique == "bin":
        out = []
        for k in config.bin_ks:
            for phase in BIN_PHASES if k == 2 else ((0, 0),):
                out.append(((k,) + phase, bin_mosaic(image_plane, k, phase), 1.0 / k))
        return out
    raise ValueError(f"unknown technique {technique!r}")


def attribute(image_fe, video_fe, config=MatchConfig(), catalog=None, model=None):
    """Full attribution of an image FE against a video FE -> MatchReport."""
    t0 = time.perf_counter()
    image_plane = _as_plane(image_fe)
    video_plane = _as_plane(video_fe)

    image_dims = MediaDims(*image_plane.shape)
    recorded_video_dims = MediaDims(*video_plane.shape)

    if not config.skip_boundary_crop:
        try:
            video_plane = crop_boundary_plane(video_plane, config.boundary_rows)
        except ValueError:
            return MatchReport("no_match", 0.0, None, (0, 0), 0,
                               time.perf_counter() - t0,
                               reason="video FE too small for boundary crop")

    # the factor range comes from the cropped template (it has to fit inside
    # the scaled image), but the cropping-ratio cutoff uses the recorded video
    # dimensions: the boundary trim is our own doing, not camera cropping
    video_dims = MediaDims(*video_plane.shape)
    sr = search_range(video_dims, image_dims, r1=config.r1,
                      sensor_aspect=config.sensor_aspect)
    schedule = hypothesis_schedule(replace(sr, video=recorded_video_dims),
                                   max_crop_ratio=config.max_crop_ratio)

    # a catalog hit is the single most likely factor: try it first
    if catalog is not None and model is not None:
        hit = catalog.lookup(model, (image_plane.shape[1], image_plane.shape[0]),
                             (video_plane.shape[1], video_plane.shape[0]))
        if hit is not None and hit.rf not in schedule:
            schedule = [hit.rf] + schedule

    if not schedule:
        return MatchReport("no_match", 0.0, None, (0, 0), 0,
                           time.perf_counter() - t0,
                           reason="empty hypothesis schedule (incompatible dims)")

    tried = 0
    best = None  # (pce, -|factor-1| tiebreak, hypothesis, offset)
    fft_cache = {}  # padded video-plane spectra, shared across hypotheses
    for technique in config.techniques:
        for phase, base_plane, pre in _image_variants(image_plane, technique, config):
            for f in schedule:
                target = _scaled_dims(image_plane.shape, f)
                residual = f / pre
                if min(target) < config.pce_window:
                    continue
                scaled = bilinear_scale_plane(base_plane, residual, out_shape=target)
                if scaled.std() == 0 or video_plane.std() == 0:
                    continue
                result = _correlate_pair(scaled, video_plane, config.pce_window,
                                         fft_cache=fft_cache)
                if result is None:
                    continue
                tried += 1
                value, offset = result
                hyp = ResizeHypothesis(technique, f, phase)
                key = (value, -abs(f - 1.0))
                if best is None or key > (best[0], -abs(best[2].factor - 1.0)):
                    best = (value, offset, hyp)
                if value > config.tau and not config.exhaustive:
                    return MatchReport("match", value, hyp, offset, tried,
                                       time.perf_counter() - t0)
    if tried == 0:
        return MatchReport("no_match", 0.0, None, (0, 0), 0,
                           time.perf_counter() - t0,
                           reason="no computable hypothesis (incompatible dims)")
    value, offset, hyp = best
    if value > config.tau:
        return MatchReport("match", value, hyp, offset, tried,
                           time.perf_counter() - t0)
    return MatchReport("no_match", value, None, offset, tried,
                       time.perf_counter() - t0)


def attribute_with_strategy(image_fe, video_fe, fe_quality, config=MatchConfig(),
                            catalog=None, model=None):
    """Technique list by FE quality: high -> bilinear only; low -> + binning."""
    if fe_quality not in ("high", "low"):
        raise ValueError("fe_quality must be 'high' or 'low'")
    techniques = ("bscale",) if fe_quality == "high" else ("bscale", "bin")
    return attribute(image_fe, video_fe, replace(config, techniques=techniques),
                     catalog=catalog, model=model)
