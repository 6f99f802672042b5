"""Camera parameter catalog: known (image, video) -> matching resolution + factor.

Line-oriented text format, one entry per line:

    # sensor: <model> <WxH> key=value ...
    <model>, <image WxH>, <video WxH>, <match WxH>, <rf>

Dimensions are written width x height as conventionally printed for camera
resolutions.  '# sensor:' lines annotate a model with its full sensor
resolution and optional flags (e.g. boundary=yes, mode=resizing).  Parsing a
canonical-form file and serializing it again is byte-identical.
"""

import os
from dataclasses import dataclass, field

HEADER = "# camera parameter catalog\n# model | image | video | match resol. | rf\n"


@dataclass(frozen=True)
class SensorInfo:
    model: str
    dims: tuple  # (width, height)
    flags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    model: str
    image_dims: tuple  # (width, height)
    video_dims: tuple
    match_dims: tuple
    rf: float


def _parse_dims(text):
    w, h = text.lower().split("x")
    return (int(w), int(h))


def _fmt_dims(d):
    return f"{d[0]}x{d[1]}"


class CameraCatalog:
    def __init__(self, entries=None, sensors=None):
        self.entries = list(entries or [])
        self.sensors = list(sensors or [])

    def lookup(self, model, image_dims, video_dims):
        for e in self.entries:
            if (e.model == model and e.image_dims == tuple(image_dims)
                    and e.video_dims == tuple(video_dims)):
                return e
        return None

    def sensor(self, model):
        for s in self.sensors:
            if s.model == model:
                return s
        return None

    def add(self, entry):
        if self.lookup(entry.model, entry.image_dims, entry.video_dims):
            raise ValueError("duplicate catalog entry")
        self.entries.append(entry)

    def add_sensor(self, info):
        if self.sensor(info.model) is not None:
            raise ValueError(f"duplicate sensor line for {info.model!r}")
        self.sensors.append(info)


def parse_catalog(text):
    entries = []
    sensors = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("sensor:"):
                toks = body[len("sensor:"):].split()
                # trailing tokens: dims then key=value flags; the rest is the model
                pairs = []
                while toks and "=" in toks[-1]:
                    pairs.append(toks.pop().split("=", 1))
                flags = dict(reversed(pairs))
                if not toks:
                    raise ValueError(f"line {lineno}: malformed sensor line")
                dims = _parse_dims(toks.pop())
                model = " ".join(toks)
                sensors.append(SensorInfo(model, dims, flags))
            continue
        parts = [p.strip() for p in stripped.split(",")]
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 comma-separated fields")
        model, image, video, match, rf = parts
        entries.append(CatalogEntry(model, _parse_dims(image), _parse_dims(video),
                                    _parse_dims(match), float(rf)))
    return CameraCatalog(entries, sensors)


def serialize_catalog(catalog):
    lines = [HEADER.rstrip("\n")]
    for s in catalog.sensors:
        flags = "".join(f" {k}={v}" for k, v in s.flags.items())
        lines.append(f"# sensor: {s.model} {_fmt_dims(s.dims)}{flags}")
    for e in catalog.entries:
        lines.append(f"{e.model}, {_fmt_dims(e.image_dims)}, {_fmt_dims(e.video_dims)}, "
                     f"{_fmt_dims(e.match_dims)}, {e.rf:.4f}")
    return "\n".join(lines) + "\n"


def load_catalog(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_catalog(fh.read())


def save_catalog(path, catalog):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(serialize_catalog(catalog))


def default_catalog_path():
    return os.path.join(os.path.dirname(__file__), "data", "cameras.txt")


def load_default_catalog():
    return load_catalog(default_catalog_path())
