"""Command-line interface: fingerprint building, matching, RoA reports,
synthetic experiments and camera-catalog management.

Exit codes: 0 success / match, 1 no-match (or lookup miss), 2 error.
Machine-readable output lines are single-line, fixed field order.
"""

import argparse
import os
import sys

import numpy as np

from . import catalog as catalog_mod
from .bayer import RgbImage, demosaic_bilinear, read_raw_frame
from .matcher import MatchConfig, attribute
from .pipeline import compose_pipeline, half_res_steps, parse_pipeline
from .prnu import (accumulate_fingerprint, extract_noise, read_fingerprint,
                   write_fingerprint)
from .roa import ANALYTIC_ROA_TABLE, TECHNIQUES, roa
from .search import MediaDims, hypothesis_schedule, search_range
from .simulate import (run_attribution_experiment, run_roa_correlation_experiment,
                       run_speed_benchmark)

CACHE_ENV = "PRNU_MIXED_CACHE"


# --- minimal still-image ingestion (PGM/PPM binary + raw frames) -------------

def _read_netpbm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    i = 0
    while len(tokens) < 4:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] != b"\n":
                i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace():
            j += 1
        tokens.append(data[i:j])
        i = j
    magic, w, h, maxval = tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3])
    payload = data[i + 1:]
    if magic == b"P5":
        arr = np.frombuffer(payload[:w * h], dtype=np.uint8).reshape(h, w)
        arr = arr.astype(np.float64) / maxval
        return RgbImage(np.stack([arr] * 3, axis=-1))
    if magic == b"P6":
        arr = np.frombuffer(payload[:3 * w * h], dtype=np.uint8).reshape(h, w, 3)
        return RgbImage(arr.astype(np.float64) / maxval)
    raise ValueError(f"unsupported netpbm magic {magic!r} in {path}")


def load_still(path):
    if path.endswith(".praw"):
        return demosaic_bilinear(read_raw_frame(path).active_image())
    if path.endswith((".pgm", ".ppm")):
        return _read_netpbm(path)
    raise ValueError(f"unsupported still format: {path}")


# --- manifest ----------------------------------------------------------------

MANIFEST_ROLES = ("train-image", "test-image", "video-frames")


def parse_manifest(text):
    rows = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 4:
            raise ValueError(f"manifest line {lineno}: expected path, role, camera, WxH")
        path, role, camera, dims = parts
        if role not in MANIFEST_ROLES:
            raise ValueError(f"manifest line {lineno}: unknown role {role!r}")
        if path in seen:
            raise ValueError(f"manifest line {lineno}: duplicate path {path!r}")
        seen.add(path)
        w, h = dims.lower().split("x")
        rows.append((path, role, camera, (int(h), int(w))))
    return rows


def cmd_fingerprint(args):
    with open(args.manifest) as fh:
        rows = parse_manifest(fh.read())
    out_dir = args.out or os.environ.get(CACHE_ENV) or "."
    os.makedirs(out_dir, exist_ok=True)
    groups = {}
    for path, role, camera, dims in rows:
        groups.setdefault((camera, role, dims), []).append(path)
    if not groups:
        raise ValueError("empty manifest")
    for (camera, role, dims), paths in sorted(groups.items()):
        patterns = []
        for p in paths:
            img = load_still(p)
            if (img.height, img.width) != dims:
                raise ValueError(f"{p}: dims {img.height}x{img.width} disagree "
                                 f"with declared {dims[0]}x{dims[1]}")
            patterns.append(extract_noise(img))
        provenance = "video FE" if role == "video-frames" else "image FE"
        fp = accumulate_fingerprint(patterns, provenance=provenance)
        name = f"{camera}_{role}_{dims[1]}x{dims[0]}.fpr"
        out_path = os.path.join(out_dir, name)
        write_fingerprint(out_path, fp)
        print(f"fingerprint camera={camera} role={role} dims={dims[1]}x{dims[0]} "
              f"count={fp.count} out={out_path}")
    return 0


def cmd_match(args):
    image_fe = read_fingerprint(args.image_fe)
    video_fe = read_fingerprint(args.video_fe)
    techniques = tuple(args.techniques.split(",")) if args.techniques else ("bscale", "bin")
    config = MatchConfig(tau=args.tau, boundary_rows=args.boundary_rows,
                         max_crop_ratio=args.max_crop_ratio,
                         techniques=techniques, exhaustive=args.exhaustive,
                         skip_boundary_crop=args.no_boundary_crop)
    cat = catalog_mod.load_catalog(args.catalog) if args.catalog else None
    report = attribute(image_fe, video_fe, config, catalog=cat, model=args.model)
    win = report.winning
    print("decision={} pce={:.3f} technique={} factor={} phase={} offset={},{} "
          "tried={} time={:.3f}".format(
              report.decision, report.best_pce,
              win.technique if win else "-",
              f"{win.factor:.6g}" if win else "-",
              win.phase if win and win.phase else "-",
              report.peak_offset[0], report.peak_offset[1],
              report.hypotheses_tried, report.wall_time))
    return 0 if report.decision == "match" else 1


def _pipeline_steps(spec):
    if spec in TECHNIQUES:
        return half_res_steps(spec)
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_pipeline(fh.read())
    return parse_pipeline(spec)


def cmd_roa(args):
    from .bayer import BayerPattern
    h, w = (int(x) for x in args.dims.lower().split("x"))
    if args.table:
        maps = {t: compose_pipeline((h, w), BayerPattern.RGGB, _pipeline_steps(t))
                for t in TECHNIQUES}
        sep = "," if args.csv else "  "
        print("technique" + sep + sep.join(TECHNIQUES))
        for ta in TECHNIQUES:
            cells = [f"{float(roa(maps[ta], maps[tb]).combined):.4f}"
                     for tb in TECHNIQUES]
            print(ta + sep + sep.join(cells))
        return 0
    if not args.pipeline_a or not args.pipeline_b:
        raise ValueError("two pipelines required (or use --table)")
    steps_a = _pipeline_steps(args.pipeline_a)
    steps_b = _pipeline_steps(args.pipeline_b)
    map_a = compose_pipeline((h, w), BayerPattern.RGGB, steps_a)
    map_b = compose_pipeline((h, w), BayerPattern.RGGB, steps_b)
    report = roa(map_a, map_b)
    analytic = ANALYTIC_ROA_TABLE.get((args.pipeline_a, args.pipeline_b))
    a_r, a_g, a_b, comb = report.as_floats()
    if args.csv:
        print("a_r,a_g,a_b,combined,analytic")
        print(f"{a_r:.6f},{a_g:.6f},{a_b:.6f},{comb:.6f},"
              f"{'' if analytic is None else analytic}")
    else:
        if analytic is not None:
            print(f"analytic (published): {analytic:.2f}")
        print(f"empirical: A_R={a_r:.6f} A_G={a_g:.6f} A_B={a_b:.6f} A={comb:.6f}")
    return 0


def cmd_simulate(args):
    if args.experiment == "correlation":
        rho, tpr = run_roa_correlation_experiment(
            n_train=args.n_train, n_test=args.n_test, dims=args.dims_n,
            seed=args.seed)
        print("mean_rho," + ",".join(TECHNIQUES))
        for i, t in enumerate(TECHNIQUES):
            print(t + "," + ",".join(f"{v:.4f}" for v in rho[i]))
        print("tpr," + ",".join(TECHNIQUES))
        for i, t in enumerate(TECHNIQUES):
            print(t + "," + ",".join(f"{v:.4f}" for v in tpr[i]))
        return 0
    if args.experiment == "attribution":
        reports, tpr, _, fpr = run_attribution_experiment(
            n_cameras=args.n_cameras, seed=args.seed, n_null=args.n_null)
        print(f"tpr={tpr:.4f} fpr={fpr:.4f} cameras={len(reports)}")
        return 0
    if args.experiment == "benchmark":
        out = run_speed_benchmark(seed=args.seed)
        for label in ("exhaustive", "smart"):
            r = out[label]
            print(f"{label}: hypotheses={r['hypotheses']} seconds={r['seconds']:.2f}")
        print(f"speedup={out['exhaustive']['seconds'] / out['smart']['seconds']:.2f}x")
        return 0
    raise ValueError(f"unknown experiment {args.experiment!r}")


def cmd_catalog(args):
    path = args.catalog or catalog_mod.default_catalog_path()
    cat = catalog_mod.load_catalog(path)
    if args.action == "show":
        sys.stdout.write(catalog_mod.serialize_catalog(cat))
        return 0
    if args.action == "lookup":
        image = tuple(int(x) for x in args.image.lower().split("x"))
        video = tuple(int(x) for x in args.video.lower().split("x"))
        entry = cat.lookup(args.model, image, video)
        if entry is not None:
            print(f"hit model={entry.model} match={entry.match_dims[0]}x{entry.match_dims[1]} "
                  f"rf={entry.rf:.4f}")
            return 0
        # miss: suggest a search range (dims here are width x height)
        sr = search_range(MediaDims(video[1], video[0]), MediaDims(image[1], image[0]))
        n = len(hypothesis_schedule(sr))
        print(f"miss range=[{sr.lo:.4f},{sr.hi:.4f}] hypotheses={n}")
        return 1
    if args.action == "add":
        image = tuple(int(x) for x in args.image.lower().split("x"))
        video = tuple(int(x) for x in args.video.lower().split("x"))
        match = tuple(int(x) for x in args.match.lower().split("x"))
        cat.add(catalog_mod.CatalogEntry(args.model, image, video, match, args.rf))
        catalog_mod.save_catalog(path, cat)
        print(f"added {args.model}")
        return 0
    raise ValueError(f"unknown catalog action {args.action!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="prnu-mixed",
                                description="PRNU mixed-media source attribution")
    sub = p.add_subparsers(dest="command", required=True)

    fp = sub.add_parser("fingerprint", help="build fingerprints from a manifest")
    fp.add_argument("manifest")
    fp.add_argument("--out", default=None,
                    help=f"output directory (default: ${CACHE_ENV} or .)")
    fp.set_defaults(fn=cmd_fingerprint)

    m = sub.add_parser("match", help="match an image FE against a video FE")
    m.add_argument("image_fe")
    m.add_argument("video_fe")
    m.add_argument("--tau", type=float, default=60.0)
    m.add_argument("--boundary-rows", type=int, default=20)
    m.add_argument("--max-crop-ratio", type=float, default=1.6)
    m.add_argument("--techniques", default=None, help="comma list, e.g. bscale,bin")
    m.add_argument("--exhaustive", action="store_true")
    m.add_argument("--no-boundary-crop", action="store_true")
    m.add_argument("--catalog", default=None)
    m.add_argument("--model", default=None)
    m.set_defaults(fn=cmd_match)

    r = sub.add_parser("roa", help="ratio of alignment between two pipelines")
    r.add_argument("pipeline_a", nargs="?",
                   help="bscale|bin|lskip, a pipeline file, or inline spec")
    r.add_argument("pipeline_b", nargs="?")
    r.add_argument("--dims", default="32x32", help="raw frame dims HxW")
    r.add_argument("--csv", action="store_true")
    r.add_argument("--table", action="store_true",
                   help="print the full 3x3 technique RoA matrix")
    r.set_defaults(fn=cmd_roa)

    s = sub.add_parser("simulate", help="synthetic validation experiments")
    s.add_argument("experiment", choices=("correlation", "attribution", "benchmark"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n-train", type=int, default=10)
    s.add_argument("--n-test", type=int, default=40)
    s.add_argument("--dims-n", type=int, default=256)
    s.add_argument("--n-cameras", type=int, default=6)
    s.add_argument("--n-null", type=int, default=20)
    s.set_defaults(fn=cmd_simulate)

    c = sub.add_parser("catalog", help="camera parameter catalog")
    c.add_argument("action", choices=("show", "lookup", "add"))
    c.add_argument("--catalog", default=None)
    c.add_argument("--model", default=None)
    c.add_argument("--image", default=None, help="image dims WxH")
    c.add_argument("--video", default=None, help="video dims WxH")
    c.add_argument("--match", default=None, help="match dims WxH (add)")
    c.add_argument("--rf", type=float, default=None)
    c.set_defaults(fn=cmd_catalog)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        raise
    except Exception as exc:  # contract: any failure -> exit 2 with diagnostic
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
