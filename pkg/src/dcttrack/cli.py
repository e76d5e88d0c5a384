"""Command-line entry points.

Subcommands: ``track``, ``eval``, ``make-synthetic``, ``confidence-map``
and ``bench-dct``.  Every file a command writes goes under its ``--out``
path.
"""

import argparse
import csv
import sys
from itertools import islice
from pathlib import Path

import numpy as np

from .bench import DEFAULT_SIZES, bench_dct, parse_range, parse_sizes, write_bench_csv
from .config import MODES, TrackerConfig, load_config
from .metrics import (evaluate_run, list_frames, load_sequence, load_truth, write_report,
                      write_summary)
from .motion import ObjectState
from .synthetic import OCCLUDERS, SyntheticSpec, make_sequence, write_sequence
from .tracker import FrameResult, TrackerSession, normalize_map

TRACKS_HEADER = ("frame", "x", "y", "scale", "score", "ms")


def _parse_box(text):
    parts = [float(v) for v in text.replace(" ", "").split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected x,y,w,h, got {text!r}")
    return tuple(parts)


def _config(args):
    cfg = load_config(args.config) if args.config else TrackerConfig()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "mode", None) is not None:
        overrides["mode"] = args.mode
    return cfg.with_overrides(**overrides) if overrides else cfg


def _init_box(args, truth):
    if args.init is not None:
        return args.init
    if truth:
        gt = truth[0]
        return (gt.cx - (gt.w - 1) / 2.0, gt.cy - (gt.h - 1) / 2.0, gt.w, gt.h)
    raise SystemExit("error: --init is required when no --truth file is given")


def write_tracks(results, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(TRACKS_HEADER)
        for r in results:
            out.writerow((r.frame, repr(r.state.x), repr(r.state.y), repr(r.state.s),
                          repr(r.score), repr(r.ms)))


def load_tracks(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [FrameResult(int(r["frame"]),
                        ObjectState(float(r["x"]), float(r["y"]), float(r["scale"])),
                        float(r["score"]), float(r["ms"])) for r in rows]


def run_tracker(frames, box, cfg, stop=None):
    """Track ``frames`` from ``box``.

    With ``stop`` set, only frames ``1 .. stop-1`` are tracked and the
    rest of ``frames`` is left unconsumed.
    """
    frames = iter(frames)
    session = TrackerSession(next(frames), box, cfg)
    todo = frames if stop is None else islice(frames, max(0, stop - 1))
    for frame in todo:
        session.track(frame)
    return session


def _report(results, truth, out_dir):
    report = evaluate_run(results, truth)
    write_report(report, out_dir / "report.csv")
    write_summary(report, out_dir / "summary.csv")
    print(f"frames={len(report.frames)} mean_tle={report.mean_tle:.3f} "
          f"std_tle={report.std_tle:.3f} tsr={report.tsr:.4f}")
    return report


def cmd_track(args):
    cfg = _config(args)
    truth = load_truth(args.truth) if args.truth else None
    box = _init_box(args, truth)
    session = run_tracker(load_sequence(args.seq), box, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_tracks(session.history, out / "tracks.csv")
    if truth is not None:
        _report(session.history, truth, out)
    else:
        print(f"tracked {len(session.history)} frames")
    return 0


def cmd_eval(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _report(load_tracks(args.tracks), load_truth(args.truth), out)
    return 0


def cmd_make_synthetic(args):
    spec = SyntheticSpec(frames=args.frames, occlusion=args.occlusion, occluder=args.occluder,
                         illumination_drop=args.illumination)
    frames, truth = make_sequence(spec, seed=args.seed)
    write_sequence(frames, truth, args.out)
    print(f"init box: {spec.start[0]},{spec.start[1]},{spec.size},{spec.size}")
    return 0


def cmd_confidence_map(args):
    if args.frame < 1:
        raise SystemExit("error: --frame must be >= 1 (frame 0 initialises the tracker)")
    cfg = _config(args)
    truth = load_truth(args.truth) if args.truth else None
    box = _init_box(args, truth)
    paths = list_frames(args.seq)
    if args.frame >= len(paths):
        raise SystemExit(f"error: sequence has only {len(paths)} frames")
    frames = load_sequence(args.seq)
    session = run_tracker(frames, box, cfg, stop=args.frame)
    target = next(frames)
    scores, xs, ys = session.confidence_map(target, args.stride)
    norm = normalize_map(scores)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y\\x"] + [repr(float(x)) for x in xs])
        for y, row in zip(ys, norm):
            w.writerow([repr(float(y))] + [repr(float(v)) for v in row])
    i, j = np.unravel_index(np.argmax(scores), scores.shape)
    print(f"peak at x={xs[j]:.1f} y={ys[i]:.1f}")
    return 0


def cmd_bench_dct(args):
    sizes = parse_sizes(args.sizes)
    depths = parse_range(args.n3)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)

    def show(r):
        print(f"{r.n1}x{r.n2} n3={r.n3}: incremental {r.incremental_s * 1e3:.3f} ms, "
              f"batch {r.batch_s * 1e3:.3f} ms, ratio {r.ratio:.2f}")

    rows = bench_dct(sizes, depths, reps=args.reps, method=args.method, progress=show)
    write_bench_csv(rows, out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="dcttrack",
                                     description="Incremental 3D-DCT visual tracking")
    sub = parser.add_subparsers(dest="command", required=True)

    def tracker_flags(p):
        p.add_argument("--seq", required=True, help="directory of frame images")
        p.add_argument("--init", type=_parse_box, help="initial box x,y,w,h")
        p.add_argument("--truth", help="ground truth file (frame cx cy w h)")
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--seed", type=int, help="overrides the config seed")
        p.add_argument("--mode", choices=MODES, help="overrides the config mode")

    p = sub.add_parser("track", help="track an object through a frame directory")
    tracker_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("eval", help="score a stored tracks.csv against ground truth")
    p.add_argument("--tracks", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("make-synthetic", help="write a synthetic moving-square sequence")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int, default=SyntheticSpec.frames)
    p.add_argument("--occlusion", action="store_true", help="hide the target in frames 20-25")
    p.add_argument("--occluder", choices=OCCLUDERS, default="stripes")
    p.add_argument("--illumination", type=float, default=0.0,
                   help="fraction of brightness lost by the last frame")
    p.set_defaults(func=cmd_make_synthetic)

    p = sub.add_parser("confidence-map", help="dump a normalized score map for one frame")
    tracker_flags(p)
    p.add_argument("--frame", type=int, required=True)
    p.add_argument("--stride", type=int, default=2)
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(func=cmd_confidence_map)

    p = sub.add_parser("bench-dct", help="time incremental vs batch 3D-DCT")
    p.add_argument("--sizes", default=",".join(f"{a}x{b}" for a, b in DEFAULT_SIZES))
    p.add_argument("--n3", default="20:200:20", help="start:stop:step, inclusive")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--method", choices=("fft", "matrix", "auto"), default="fft")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(func=cmd_bench_dct)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
