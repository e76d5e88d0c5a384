"""Timing of incremental versus batch 3D-DCT updates.

For each patch size and stack depth ``n3`` the incremental side appends
one frame to a cache already holding ``n3 - 1`` slices and recomputes the
coefficients; the batch side transforms the full ``(N1, N2, n3)`` stack
from scratch.
"""

import csv
import gc
import time
from dataclasses import astuple, dataclass

import numpy as np

from .dctcore import dct3
from .incremental import DctCache

__all__ = ["BenchRow", "DEFAULT_SIZES", "parse_range", "parse_sizes", "time_calls",
           "bench_dct", "write_bench_csv"]

DEFAULT_SIZES = ((30, 30), (60, 60), (90, 90))
BENCH_HEADER = ("n1", "n2", "n3", "incremental_s", "batch_s", "ratio")


@dataclass(frozen=True)
class BenchRow:
    n1: int
    n2: int
    n3: int
    incremental_s: float
    batch_s: float

    @property
    def ratio(self):
        return self.batch_s / self.incremental_s


def parse_range(text):
    """``"start:stop:step"`` to the inclusive list of depths."""
    parts = [int(p) for p in text.split(":")]
    if len(parts) == 1:
        parts = [parts[0], parts[0], 1]
    elif len(parts) == 2:
        parts.append(1)
    start, stop, step = parts
    if start < 2 or stop < start or step < 1:
        raise ValueError(f"need 2 <= start <= stop and step >= 1, got {text!r}")
    return list(range(start, stop + 1, step))


def parse_sizes(text):
    """``"30x30,60x60"`` (or bare ``"30,60"`` for squares) to size pairs."""
    sizes = []
    for item in text.split(","):
        item = item.strip().lower()
        if not item:
            continue
        n1, _, n2 = item.partition("x")
        sizes.append((int(n1), int(n2 or n1)))
    if not sizes or min(min(s) for s in sizes) < 1:
        raise ValueError(f"invalid size list {text!r}")
    return sizes


def _loops(fn, min_time):
    fn()  # warm caches and basis tables
    t0 = time.perf_counter()
    fn()
    once = time.perf_counter() - t0
    return max(1, int(np.ceil(min_time / max(once, 1e-9))))


def time_calls(fns, reps=5, min_time=0.02):
    """Median per-call wall time of each function in ``fns``.

    Every repetition runs each function in turn, looping it for about
    ``min_time`` seconds, so slow drifts of the machine hit all of them
    alike and timer resolution stays out of small cases.  Garbage
    collection is paused while timing.
    """
    loops = [_loops(fn, min_time) for fn in fns]
    samples = [[] for _ in fns]
    enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(max(1, int(reps))):
            for fn, n, out in zip(fns, loops, samples):
                t0 = time.perf_counter()
                for _ in range(n):
                    fn()
                out.append((time.perf_counter() - t0) / n)
    finally:
        if enabled:
            gc.enable()
    return [float(np.median(s)) for s in samples]


def bench_dct(sizes=DEFAULT_SIZES, depths=(50, 100, 150, 200), reps=5, method="fft",
              seed=0, progress=None):
    """Time both update paths for every ``(size, depth)`` pair.

    Returns a list of :class:`BenchRow`, sizes outermost.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for n1, n2 in sizes:
        for n3 in depths:
            frames = rng.random((n3, n1, n2))
            cache = DctCache.from_patches(frames[:-1], method=method)
            stack = np.moveaxis(frames, 0, -1)

            def incremental():
                cache.append(frames[-1], method=method).coefficients(method=method)

            def batch():
                dct3(stack, method=method)

            row = BenchRow(n1, n2, n3, *time_calls((incremental, batch), reps))
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


def write_bench_csv(rows, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(BENCH_HEADER)
        for r in rows:
            out.writerow(astuple(r) + (r.ratio,))
