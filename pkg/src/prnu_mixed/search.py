"""Resizing-factor search ranges and the ordered hypothesis schedule.

An image fingerprint is matched against a video fingerprint by trying
resizing factors on a geometric lattice 1/(1 + 0.005 i).  The admissible
range depends on the media dimensions and on the image's own in-camera
resizing factor r1; hypotheses implying an implausibly large crop are
dropped and the rest are ordered so near-no-crop factors come first.
"""

from dataclasses import dataclass, field
from fractions import Fraction

LATTICE_STEP = 0.005
DEFAULT_MAX_CROP_RATIO = 1.6
ASPECT_RTOL = 1e-3


@dataclass(frozen=True)
class MediaDims:
    """Dimensions of a fingerprint plane: rows x cols (height x width)."""

    rows: int
    cols: int
    r1: object = None  # known in-camera resizing factor, rational in (0,1]

    def __post_init__(self):
        if self.rows < 16 or self.cols < 16:
            raise ValueError("media dimensions must be at least 16x16")
        if self.r1 is not None:
            r1 = Fraction(self.r1)
            if not 0 < r1 <= 1:
                raise ValueError("r1 must lie in (0, 1]")
            object.__setattr__(self, "r1", r1)

    @property
    def aspect(self):
        return self.cols / self.rows


@dataclass(frozen=True)
class SearchRange:
    lo: float
    hi: float
    case: str  # 'same_aspect' or 'diff_aspect'
    video: MediaDims
    image: MediaDims

    @property
    def empty(self):
        return self.lo > self.hi


@dataclass(frozen=True)
class CroppingRatio:
    value: float

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("cropping ratio must be positive")


def cropping_ratio(scaled_dims, video_dims):
    """min(scaled_rows / video_rows, scaled_cols / video_cols)."""
    sr, sc = scaled_dims
    vr, vc = video_dims
    if min(sr, sc, vr, vc) <= 0:
        raise ValueError("dimensions must be positive")
    return CroppingRatio(min(sr / vr, sc / vc))


def search_range(video, image, r1=None, sensor_aspect=None):
    """Admissible resizing-factor range for matching image FE to video FE.

    r1 (or image.r1) is the image's own in-camera factor; the upper bound is
    1/r1.  If the image aspect differs from the sensor aspect (the image was
    cropped in-camera), the lower bound relaxes from max to min of the
    per-axis ratios.  sensor_aspect defaults to the image aspect (no crop).
    """
    if r1 is None:
        r1 = image.r1 if image.r1 is not None else 1
    r1 = Fraction(r1)
    if not 0 < r1 <= 1:
        raise ValueError("r1 must lie in (0, 1]")
    row_ratio = video.rows / image.rows
    col_ratio = video.cols / image.cols
    if sensor_aspect is None:
        same_aspect = True
    else:
        same_aspect = abs(image.aspect - sensor_aspect) <= ASPECT_RTOL * sensor_aspect
    lo = max(row_ratio, col_ratio) if same_aspect else min(row_ratio, col_ratio)
    hi = 1 / float(r1)
    return SearchRange(lo=lo, hi=hi,
                       case="same_aspect" if same_aspect else "diff_aspect",
                       video=video, image=image)


def factor_lattice(lo, hi):
    """All lattice factors in [lo, hi]: 1/(1+0.005 i) below 1, (1+0.005 i) above.

    Returned in descending order (largest factor first).
    """
    if lo > hi:
        return []
    factors = []
    # sub-unit branch: f = 1/(1 + step*i), i >= 0
    i = 0
    while True:
        f = 1.0 / (1.0 + LATTICE_STEP * i)
        if f < lo - 1e-12:
            break
        if f <= hi + 1e-12:
            factors.append(f)
        i += 1
    # above-unit branch: f = 1 + step*i, i >= 1 (mirror of the same lattice)
    i = 1
    while True:
        f = 1.0 + LATTICE_STEP * i
        if f > hi + 1e-12:
            break
        if f >= lo - 1e-12:
            factors.append(f)
        i += 1
    return sorted(set(factors), reverse=True)


def implied_cropping_ratio(factor, sr):
    """Cropping ratio of one factor hypothesis within a SearchRange."""
    scaled = (sr.image.rows * factor, sr.image.cols * factor)
    return cropping_ratio(scaled, (sr.video.rows, sr.video.cols)).value


def hypothesis_schedule(sr, max_crop_ratio=DEFAULT_MAX_CROP_RATIO):
    """Ordered factor list: lattice ∩ [lo, hi], crop-filtered, near-1 first.

    Hypotheses whose implied cropping ratio exceeds max_crop_ratio are
    dropped; survivors are sorted by |ratio - 1| ascending (ties: smaller
    ratio first), so near-no-crop factors are tried first.
    """
    if sr.empty:
        return []
    out = []
    for f in factor_lattice(sr.lo, sr.hi):
        ratio = implied_cropping_ratio(f, sr)
        if ratio <= max_crop_ratio + 1e-12:
            out.append((f, ratio))
    out.sort(key=lambda fr: (abs(fr[1] - 1.0), fr[1]))
    return [f for f, _ in out]


def lookup_or_search(catalog, model, image_dims, video_dims, r1=None):
    """Catalog hit -> stored (match_dims, rf); miss -> fresh SearchRange.

    image_dims / video_dims are MediaDims.  Returns ('hit', entry) or
    ('search', SearchRange).
    """
    if catalog is not None and model is not None:
        entry = catalog.lookup(model, (image_dims.rows, image_dims.cols),
                               (video_dims.rows, video_dims.cols))
        if entry is not None:
            return ("hit", entry)
    return ("search", search_range(video_dims, image_dims, r1=r1))
