"""PRNU noise extraction, fingerprint aggregation and correlation statistics.

The sensor model is I = I0 + I0*X + psi: a multiplicative per-site pattern X
plus additive noise.  Noise residuals (image minus denoised image) estimate
X; averaging residuals over many stills builds a camera fingerprint; NCC
locates an unknown crop offset and PCE thresholds the decision.
"""

import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import irfftn, next_fast_len, rfftn
from scipy.ndimage import uniform_filter

from .bayer import RgbImage

# Per-channel combination weights for the R, G, B noise residuals.
CHANNEL_WEIGHTS = (0.3, 0.6, 0.1)

# Returned by pce() when the off-peak background energy is exactly zero
# (e.g. a delta surface).  Large but finite so reports stay printable.
PCE_SENTINEL = 1e12

# Residual RMS below this (on [0,1] intensities) marks a pattern as
# low-quality: essentially no texture/noise survived denoising.
LOW_QUALITY_RMS = 1e-8


def mean3_denoiser(plane):
    """3x3 local-mean smoothing (the default zero-phase denoiser)."""
    return uniform_filter(plane, size=3, mode="reflect")


DENOISERS = {"mean3": mean3_denoiser}


@dataclass(frozen=True)
class NoisePattern:
    """Zero-mean noise residual extracted from one still."""

    plane: np.ndarray
    source_kind: str = "image"  # 'image' or 'video_frame'
    count: int = 1
    low_quality: bool = False

    def __post_init__(self):
        p = np.asarray(self.plane, dtype=np.float64)
        if p.ndim != 2:
            raise ValueError("noise pattern must be 2-D")
        if not np.all(np.isfinite(p)):
            raise ValueError("noise pattern must be finite")
        object.__setattr__(self, "plane", p)
        p.setflags(write=False)


@dataclass(frozen=True)
class Fingerprint:
    """Averaged noise pattern for one camera at one resolution."""

    plane: np.ndarray
    count: int = 1
    provenance: str = "image FE"  # 'image FE' or 'video FE'
    denoiser: str = "mean3"

    def __post_init__(self):
        p = np.asarray(self.plane, dtype=np.float64)
        if p.ndim != 2:
            raise ValueError("fingerprint plane must be 2-D")
        if self.count < 1:
            raise ValueError("fingerprint count must be >= 1")
        if self.provenance not in ("image FE", "video FE"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "plane", p)
        p.setflags(write=False)

    @property
    def shape(self):
        return self.plane.shape


@dataclass(frozen=True)
class CorrelationResult:
    peak_pce: float
    peak_offset: tuple
    surface_shape: tuple
    rho_at_peak: float


def zero_mean_total(plane):
    """Remove the global, per-row and per-column means.

    Suppresses linear-pattern artifacts (demosaic/row-noise structure) that
    would otherwise correlate across unrelated cameras.
    """
    out = plane - plane.mean()
    out = out - out.mean(axis=1, keepdims=True)
    out = out - out.mean(axis=0, keepdims=True)
    return out


def extract_noise(img, denoiser="mean3"):
    """Noise residual of an RgbImage, channel-combined 0.3/0.6/0.1.

    denoiser: a key of DENOISERS or a callable plane -> denoised plane.
    """
    if isinstance(img, RgbImage):
        data = img.data
    else:
        data = np.asarray(img, dtype=np.float64)
        if data.ndim != 3 or data.shape[2] != 3:
            raise ValueError("extract_noise expects an (H, W, 3) image")
    fn = DENOISERS[denoiser] if isinstance(denoiser, str) else denoiser
    combined = np.zeros(data.shape[:2])
    for c, w in enumerate(CHANNEL_WEIGHTS):
        plane = data[:, :, c]
        combined += w * (plane - fn(plane))
    combined = zero_mean_total(combined)
    rms = float(np.sqrt(np.mean(combined ** 2)))
    return NoisePattern(combined, low_quality=rms < LOW_QUALITY_RMS)


def accumulate_fingerprint(patterns, provenance="image FE", denoiser="mean3"):
    """Per-pixel mean of noise patterns -> Fingerprint."""
    patterns = list(patterns)
    if not patterns:
        raise ValueError("cannot accumulate an empty pattern list")
    shape = patterns[0].plane.shape
    for p in patterns:
        if p.plane.shape != shape:
            raise ValueError("noise patterns have mismatched dimensions")
    plane = np.mean([p.plane for p in patterns], axis=0)
    return Fingerprint(plane, count=len(patterns), provenance=provenance,
                       denoiser=denoiser)


def pearson(a, b):
    """Pearson correlation coefficient of two equal-shape arrays."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError("pearson needs equal-size inputs")
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a @ a) * (b @ b))
    if denom == 0:
        raise ValueError("pearson undefined for constant input")
    return float((a @ b) / denom)


def _xcorr_valid(a, bz, fft_cache=None):
    """'valid'-mode linear cross-correlation of a with template bz via FFT.

    Equivalent to fftconvolve(a, bz[::-1, ::-1], mode='valid'); the padded
    template spectrum can be cached across calls with the same template.
    """
    ha, wa = a.shape
    hb, wb = bz.shape
    fshape = (next_fast_len(ha + hb - 1), next_fast_len(wa + wb - 1))
    fb = None if fft_cache is None else fft_cache.get(fshape)
    if fb is None:
        fb = rfftn(bz[::-1, ::-1], fshape)
        if fft_cache is not None:
            fft_cache[fshape] = fb
    full = irfftn(rfftn(a, fshape) * fb, fshape)
    return full[hb - 1:ha, wb - 1:wa].copy()


def _window_sums(a, win_shape):
    """Sum of `a` over every window of win_shape (like a 'valid' box filter)."""
    hb, wb = win_shape
    s = np.zeros((a.shape[0] + 1, a.shape[1] + 1))
    np.cumsum(np.cumsum(a, axis=0), axis=1, out=s[1:, 1:])
    return (s[hb:, wb:] - s[:-hb, wb:] - s[hb:, :-wb] + s[:-hb, :-wb])


def _as_plane(x):
    if isinstance(x, Fingerprint):
        return x.plane
    if isinstance(x, NoisePattern):
        return x.plane
    return np.asarray(x, dtype=np.float64)


def ncc_surface(a, b, mode="valid", fft_cache=None):
    """Normalized cross-correlation of template b at all translations in a.

    mode 'valid': b must fit inside a; surface index (i, j) is the offset of
    b's top-left corner within a.  mode 'full': all partial overlaps against
    a zero background; index (i, j) corresponds to offset (i - hb + 1,
    j - wb + 1).  Values lie in [-1, 1]; offsets with (numerically) zero
    local variance report 0.

    fft_cache: optional dict; when the same template b is correlated against
    many differently-sized search images (the matcher's hypothesis loop),
    its padded spectra are cached keyed by FFT shape.
    """
    a = _as_plane(a)
    b = _as_plane(b)
    ha, wa = a.shape
    hb, wb = b.shape
    if mode == "valid" and (hb > ha or wb > wa):
        raise ValueError("template larger than search image")
    if b.std() == 0:
        raise ValueError("zero-variance template")
    if mode == "full":
        a = np.pad(a, ((hb - 1, hb - 1), (wb - 1, wb - 1)))
    bz = b - b.mean()
    b_energy = float((bz ** 2).sum())
    # local sums of a and a^2 over every b-size window via integral images
    win_sum = _window_sums(a, b.shape)
    win_sum2 = _window_sums(a ** 2, b.shape)
    num = _xcorr_valid(a, bz, fft_cache)
    n = b.size
    win_var = win_sum2 - win_sum ** 2 / n
    win_var = np.maximum(win_var, 0.0)
    denom = np.sqrt(win_var * b_energy)
    out = np.zeros_like(num)
    good = denom > 1e-12 * max(b_energy, 1.0)
    out[good] = num[good] / denom[good]
    return np.clip(out, -1.0, 1.0)


def ncc_surface_direct(a, b):
    """Direct-space reference for ncc_surface(mode='valid'); small inputs only."""
    a = _as_plane(a)
    b = _as_plane(b)
    ha, wa = a.shape
    hb, wb = b.shape
    out = np.zeros((ha - hb + 1, wa - wb + 1))
    bz = b - b.mean()
    b_energy = (bz ** 2).sum()
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            win = a[i:i + hb, j:j + wb]
            wz = win - win.mean()
            denom = np.sqrt((wz ** 2).sum() * b_energy)
            if denom > 1e-12 * max(b_energy, 1.0):
                out[i, j] = (wz * bz).sum() / denom
    return np.clip(out, -1.0, 1.0)


def peak_location(surface):
    """(row, col) of the maximum surface value."""
    idx = int(np.argmax(surface))
    return np.unravel_index(idx, surface.shape)


def pce(surface, peak=None, window=11):
    """Peak-to-correlation energy of a correlation surface.

    Signed squared peak divided by the mean squared value outside a
    window x window exclusion region around the peak.  Zero background
    energy returns PCE_SENTINEL (sign-carrying).
    """
    surface = np.asarray(surface, dtype=np.float64)
    if surface.shape[0] < window or surface.shape[1] < window:
        raise ValueError(f"surface smaller than the {window}x{window} exclusion window")
    if peak is None:
        peak = peak_location(surface)
    pi, pj = peak
    peak_val = surface[pi, pj]
    half = window // 2
    mask = np.ones(surface.shape, dtype=bool)
    mask[max(0, pi - half):pi + half + 1, max(0, pj - half):pj + half + 1] = False
    background = surface[mask]
    energy = float(np.mean(background ** 2))
    sign = 1.0 if peak_val >= 0 else -1.0
    if energy == 0.0:
        return sign * PCE_SENTINEL
    return sign * peak_val ** 2 / energy


def correlate(a, b, mode="valid", window=11):
    """NCC + PCE in one step -> CorrelationResult (peak anywhere)."""
    surface = ncc_surface(a, b, mode=mode)
    peak = peak_location(surface)
    value = pce(surface, peak=peak, window=window)
    hb, wb = _as_plane(b).shape
    offset = peak if mode == "valid" else (peak[0] - hb + 1, peak[1] - wb + 1)
    return CorrelationResult(peak_pce=float(value), peak_offset=tuple(int(x) for x in offset),
                             surface_shape=surface.shape,
                             rho_at_peak=float(surface[peak]))


# --- fingerprint file format --------------------------------------------------
#
# 24-byte header, little endian:
#   bytes 0-3   magic b"PFPR"
#   bytes 4-5   H (rows, uint16)
#   bytes 6-7   W (cols, uint16)
#   bytes 8-11  count (uint32)
#   byte  12    provenance (0 = image FE, 1 = video FE)
#   byte  13    reserved (0)
#   bytes 14-21 denoiser id, ascii, NUL padded
#   bytes 22-23 reserved (0)
# followed by H*W row-major float32 samples.

FP_MAGIC = b"PFPR"
_FP_HEADER = struct.Struct("<4sHHIBB8sH")
_PROVENANCE_IDS = {"image FE": 0, "video FE": 1}
_PROVENANCE_FROM_ID = {v: k for k, v in _PROVENANCE_IDS.items()}


def write_fingerprint(path, fp):
    h, w = fp.shape
    den = fp.denoiser.encode("ascii")[:8]
    header = _FP_HEADER.pack(FP_MAGIC, h, w, fp.count,
                             _PROVENANCE_IDS[fp.provenance], 0, den, 0)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(fp.plane.astype("<f4").tobytes())


def read_fingerprint(path):
    with open(path, "rb") as fh:
        header = fh.read(_FP_HEADER.size)
        if len(header) != _FP_HEADER.size:
            raise ValueError("truncated fingerprint header")
        magic, h, w, count, prov_id, _, den, _ = _FP_HEADER.unpack(header)
        if magic != FP_MAGIC:
            raise ValueError("bad fingerprint magic")
        if prov_id not in _PROVENANCE_FROM_ID:
            raise ValueError(f"unknown provenance id {prov_id}")
        payload = fh.read(4 * h * w)
        if len(payload) != 4 * h * w:
            raise ValueError("truncated fingerprint payload")
    plane = np.frombuffer(payload, dtype="<f4").reshape(h, w).astype(np.float64)
    return Fingerprint(plane, count=count, provenance=_PROVENANCE_FROM_ID[prov_id],
                       denoiser=den.rstrip(b"\0").decode("ascii"))
