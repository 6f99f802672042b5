"""Tests for the camera parameter catalog."""

import pytest

from prnu_mixed.catalog import (CameraCatalog, CatalogEntry, SensorInfo,
                                load_default_catalog, parse_catalog,
                                serialize_catalog)

SAMPLE = """# camera parameter catalog
# model | image | video | match resol. | rf
# sensor: Cam One 4224x3136 boundary=yes mode=binning
Cam One, 4160x3120, 1280x720, 1263x948, 0.3036
Cam One, 4160x3120, 1920x1080, 1898x1424, 0.4563
Cam Two, 3264x2448, 1920x1080, 1920x1440, 0.5882
"""


def test_parse_entries_and_sensors():
    cat = parse_catalog(SAMPLE)
    assert len(cat.entries) == 3
    assert len(cat.sensors) == 1
    e = cat.entries[0]
    assert e.model == "Cam One"
    assert e.image_dims == (4160, 3120)
    assert e.video_dims == (1280, 720)
    assert e.match_dims == (1263, 948)
    assert e.rf == pytest.approx(0.3036)
    s = cat.sensors[0]
    assert s.model == "Cam One"
    assert s.dims == (4224, 3136)
    assert s.flags == {"boundary": "yes", "mode": "binning"}


def test_roundtrip_is_byte_identical():
    cat = parse_catalog(SAMPLE)
    assert serialize_catalog(cat) == SAMPLE
    # a second pass stays stable
    assert serialize_catalog(parse_catalog(serialize_catalog(cat))) == SAMPLE


def test_lookup():
    cat = parse_catalog(SAMPLE)
    hit = cat.lookup("Cam One", (4160, 3120), (1920, 1080))
    assert hit is not None and hit.rf == pytest.approx(0.4563)
    assert cat.lookup("Cam One", (4160, 3120), (640, 480)) is None
    assert cat.lookup("Cam Three", (4160, 3120), (1280, 720)) is None


def test_sensor_lookup():
    cat = parse_catalog(SAMPLE)
    assert cat.sensor("Cam One").dims == (4224, 3136)
    assert cat.sensor("Cam Two") is None


def test_add_rejects_duplicates():
    cat = parse_catalog(SAMPLE)
    with pytest.raises(ValueError):
        cat.add(CatalogEntry("Cam One", (4160, 3120), (1280, 720), (1, 1), 0.5))
    with pytest.raises(ValueError):
        cat.add_sensor(SensorInfo("Cam One", (1, 1)))
    cat.add(CatalogEntry("Cam One", (4160, 3120), (640, 480), (640, 480), 0.2))
    assert len(cat.entries) == 4


def test_parse_rejects_malformed_lines():
    with pytest.raises(ValueError):
        parse_catalog("Cam, 10x10, 10x10\n")  # too few fields
    with pytest.raises(ValueError):
        parse_catalog("# sensor: 1x1x1\n" * 0 + "# sensor:\n")


def test_blank_lines_and_comments_ignored():
    cat = parse_catalog("\n# just a comment\n\nCam, 100x80, 50x40, 50x40, 0.5000\n")
    assert len(cat.entries) == 1


def test_default_catalog_loads_and_roundtrips():
    cat = load_default_catalog()
    assert len(cat.entries) >= 5
    # the known half-resolution Full HD pairing is present
    hit = cat.lookup("Nexus 5", (3264, 2448), (1920, 1080))
    assert hit is not None
    assert hit.rf == pytest.approx(0.5882)
    assert serialize_catalog(parse_catalog(serialize_catalog(cat))) == \
        serialize_catalog(cat)
