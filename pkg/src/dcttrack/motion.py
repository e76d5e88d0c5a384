"""Gaussian particle propagation and MAP selection over (x, y, scale)."""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ObjectState",
    "MotionParams",
    "ParticleSet",
    "propagate",
    "clamp_states",
    "map_estimate",
    "SCALE_MIN",
    "SCALE_MAX",
]

SCALE_MIN = 0.05
SCALE_MAX = 20.0


@dataclass(frozen=True)
class ObjectState:
    """Box center ``(x, y)`` in pixel coordinates and a scale factor.

    Pixel ``i`` has its center at coordinate ``i``.  The box size is the
    tracker's base size multiplied by ``s``.
    """

    x: float
    y: float
    s: float = 1.0

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"scale must be positive, got {self.s}")

    def as_array(self):
        return np.array([self.x, self.y, self.s], dtype=float)

    @classmethod
    def from_array(cls, row):
        return cls(float(row[0]), float(row[1]), float(row[2]))


@dataclass(frozen=True)
class MotionParams:
    sigma_x: float = 6.0
    sigma_y: float = 6.0
    sigma_s: float = 0.02
    v: int = 200

    def __post_init__(self):
        if min(self.sigma_x, self.sigma_y, self.sigma_s) <= 0:
            raise ValueError("motion standard deviations must be positive")
        if self.v < 1:
            raise ValueError("particle count must be >= 1")


@dataclass
class ParticleSet:
    """``states`` is a ``(V, 3)`` array of ``(x, y, s)`` rows."""

    states: np.ndarray
    scores: np.ndarray = None

    def __post_init__(self):
        self.states = np.asarray(self.states, dtype=float).reshape(-1, 3)
        if self.scores is not None:
            self.scores = np.asarray(self.scores, dtype=float)
            if self.scores.shape != (len(self.states),):
                raise ValueError("scores must have one entry per state")
            if not np.all(np.isfinite(self.scores)):
                raise ValueError("scores must be finite")

    def __len__(self):
        return len(self.states)

    def state(self, i):
        return ObjectState.from_array(self.states[i])


def clamp_states(states, frame_size, box_size):
    """Clamp ``(x, y, s)`` rows so every scaled box lies inside the frame.

    Parameters
    ----------
    states : ndarray, shape (V, 3)
    frame_size : (height, width)
    box_size : (w, h)
        Base box size at scale 1.
    """
    out = np.array(states, dtype=float).reshape(-1, 3)
    height, width = frame_size
    bw, bh = box_size
    s_max = min(SCALE_MAX, width / bw, height / bh)
    out[:, 2] = np.clip(out[:, 2], SCALE_MIN, max(SCALE_MIN, s_max))
    half_w = out[:, 2] * bw / 2.0
    half_h = out[:, 2] * bh / 2.0
    # box edges must stay within [-0.5, size - 0.5]
    lo_x, hi_x = half_w - 0.5, width - 0.5 - half_w
    lo_y, hi_y = half_h - 0.5, height - 0.5 - half_h
    out[:, 0] = np.where(lo_x <= hi_x, np.clip(out[:, 0], lo_x, hi_x), (width - 1) / 2.0)
    out[:, 1] = np.where(lo_y <= hi_y, np.clip(out[:, 1], lo_y, hi_y), (height - 1) / 2.0)
    return out


def propagate(prev, params, rng, frame_size=None, box_size=None):
    """Draw ``params.v`` states from N(prev, diag(sigma^2)).

    Scale is clamped to ``[SCALE_MIN, SCALE_MAX]``; when ``frame_size``
    and ``box_size`` are given, positions are clamped so the box stays in
    the frame.
    """
    noise = rng.standard_normal((params.v, 3))
    sigma = np.array([params.sigma_x, params.sigma_y, params.sigma_s])
    states = prev.as_array()[None, :] + noise * sigma
    states[:, 2] = np.clip(states[:, 2], SCALE_MIN, SCALE_MAX)
    if frame_size is not None and box_size is not None:
        states = clamp_states(states, frame_size, box_size)
    return ParticleSet(states)


def map_estimate(particles):
    """State with the highest score; the lowest index wins ties."""
    if particles.scores is None:
        raise ValueError("particle scores are not populated")
    if len(particles) == 0:
        raise ValueError("empty particle set")
    return particles.state(int(np.argmax(particles.scores)))
