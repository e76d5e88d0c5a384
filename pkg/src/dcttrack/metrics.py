"""Center-distance tracking metrics and the sequence/result file formats.

Ground truth is one ``frame cx cy w h`` line per frame (whitespace
separated, ``#`` comments and blank lines allowed).  Sequences are
directories of PNG/PGM/BMP frames read in lexicographic order.  Reports
are CSV files with header ``frame,tle,success,score,ms``.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "SUCCESS_RATIO",
    "GroundTruthRecord",
    "EvalReport",
    "tle",
    "success",
    "tsr",
    "evaluate_run",
    "load_sequence",
    "list_frames",
    "load_truth",
    "write_report",
    "load_report",
    "write_summary",
]

SUCCESS_RATIO = 0.25
FRAME_SUFFIXES = (".png", ".pgm", ".bmp")
REPORT_HEADER = ("frame", "tle", "success", "score", "ms")


@dataclass(frozen=True)
class GroundTruthRecord:
    frame: int
    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"box size must be positive, got {self.w}x{self.h}")


def tle(estimate, truth):
    """Euclidean distance between the estimated and true box centers.

    ``estimate`` is anything with ``x`` and ``y`` attributes.
    """
    return float(np.hypot(estimate.x - truth.cx, estimate.y - truth.cy))


def success(tle_value, truth):
    """``tle / max(w, h) < 0.25``, strictly."""
    return bool(tle_value / max(truth.w, truth.h) < SUCCESS_RATIO)


def tsr(flags):
    """Fraction of successful frames."""
    flags = np.asarray(flags, dtype=bool)
    if flags.size == 0:
        raise ValueError("no frames to rate")
    return float(np.count_nonzero(flags) / flags.size)


@dataclass(frozen=True)
class EvalReport:
    """Per-frame errors and their summary.

    Attributes
    ----------
    frames, tles, flags, scores, ms : tuple
        Per-frame columns, in frame order.
    """

    frames: tuple
    tles: tuple
    flags: tuple
    scores: tuple
    ms: tuple

    def __post_init__(self):
        n = len(self.frames)
        if not all(len(col) == n for col in (self.tles, self.flags, self.scores, self.ms)):
            raise ValueError("report columns differ in length")

    @property
    def tsr(self):
        return tsr(self.flags)

    @property
    def mean_tle(self):
        return float(np.mean(self.tles))

    @property
    def std_tle(self):
        return float(np.std(self.tles))


def evaluate_run(results, truth):
    """Score tracker output against ground truth.

    Parameters
    ----------
    results : sequence of FrameResult
        Anything with ``frame``, ``state``, ``score`` and ``ms``.
    truth : sequence of GroundTruthRecord
        Matched to ``results`` by frame index.
    """
    by_frame = {r.frame: r for r in truth}
    frames, tles, flags, scores, ms = [], [], [], [], []
    for res in results:
        if res.frame not in by_frame:
            raise KeyError(f"no ground truth for frame {res.frame}")
        gt = by_frame[res.frame]
        err = tle(res.state, gt)
        frames.append(int(res.frame))
        tles.append(err)
        flags.append(success(err, gt))
        scores.append(float(res.score))
        ms.append(float(res.ms))
    if not frames:
        raise ValueError("no results to evaluate")
    return EvalReport(tuple(frames), tuple(tles), tuple(flags), tuple(scores), tuple(ms))


def list_frames(seq_dir):
    """Sorted frame image paths in ``seq_dir``."""
    seq_dir = Path(seq_dir)
    if not seq_dir.is_dir():
        raise FileNotFoundError(f"sequence directory not found: {seq_dir}")
    paths = sorted(p for p in seq_dir.iterdir() if p.suffix.lower() in FRAME_SUFFIXES)
    if not paths:
        raise FileNotFoundError(f"no PNG/PGM/BMP frames in {seq_dir}")
    return paths


def load_sequence(seq_dir):
    """Yield frames from ``seq_dir`` as arrays, in file-name order.

    Color images are returned as ``H x W x 3``; the tracker converts them.
    """
    from PIL import Image

    for path in list_frames(seq_dir):
        with Image.open(path) as img:
            if img.mode not in ("L", "RGB"):
                img = img.convert("RGB")
            yield np.asarray(img)


def load_truth(path):
    """Read ground-truth records; a missing file is an error."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"ground-truth file not found: {path}")
    records = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ValueError(f"{path}:{lineno}: expected 'frame cx cy w h', got {line!r}")
        frame = int(parts[0])
        cx, cy, w, h = (float(v) for v in parts[1:])
        records.append(GroundTruthRecord(frame, cx, cy, w, h))
    return records


def write_report(report, path, extra=None):
    """Write per-frame rows; floats use ``repr`` so they load back exactly.

    ``extra`` maps additional column names to per-frame values.
    """
    extra = dict(extra or {})
    for name, col in extra.items():
        if len(col) != len(report.frames):
            raise ValueError(f"extra column {name!r} has the wrong length")
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(REPORT_HEADER + tuple(extra))
        for i, frame in enumerate(report.frames):
            row = [int(frame), repr(float(report.tles[i])), int(report.flags[i]),
                   repr(float(report.scores[i])), repr(float(report.ms[i]))]
            row += [repr(float(col[i])) for col in extra.values()]
            out.writerow(row)


def load_report(path):
    """Inverse of :func:`write_report`; extra columns are ignored."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and not set(REPORT_HEADER) <= set(rows[0]):
        raise ValueError(f"{path}: missing report columns")
    return EvalReport(
        tuple(int(r["frame"]) for r in rows),
        tuple(float(r["tle"]) for r in rows),
        tuple(bool(int(r["success"])) for r in rows),
        tuple(float(r["score"]) for r in rows),
        tuple(float(r["ms"]) for r in rows),
    )


def write_summary(report, path):
    """One-row CSV with frame count, mean/std TLE and TSR."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(("frames", "mean_tle", "std_tle", "tsr"))
        out.writerow((len(report.frames), repr(report.mean_tle), repr(report.std_tle),
                      repr(report.tsr)))
