"""End-to-end incremental 3D-DCT tracking loop.

Each frame: draw candidate states around the previous estimate, crop and
resize every candidate to the patch size, score it against the positive
and negative buffers, keep the best one, then harvest new training
samples around it.  A sliding-window mode replaces the particle draw with
a dense grid of candidates.
"""

import time
from dataclasses import dataclass, replace

import numpy as np

from .config import TrackerConfig
from .likelihood import evaluate_many
from .motion import ObjectState, ParticleSet, clamp_states, map_estimate, propagate
from .sampling import SampleBuffer, nearest_indices, select_negatives

__all__ = [
    "FrameResult",
    "TrackerSession",
    "crop_resize",
    "crop_resize_many",
    "to_gray",
    "box_to_state",
    "normalize_map",
    "MIN_BOX",
]

MIN_BOX = 4.0
_LUMA = np.array([0.299, 0.587, 0.114])


def to_gray(image):
    """Grayscale float image in [0, 1] from 8-bit or float, gray or color."""
    img = np.asarray(image)
    is_int = np.issubdtype(img.dtype, np.integer)
    img = img.astype(float)
    if is_int:
        img = img / 255.0
    if img.ndim == 3:
        img = img[..., :3] @ _LUMA
    if img.ndim != 2:
        raise ValueError(f"expected a 2D or HxWxC image, got shape {img.shape}")
    return np.clip(img, 0.0, 1.0)


def box_to_state(box):
    """``(left, top, w, h)`` in whole pixels to a center state at scale 1."""
    left, top, w, h = (float(v) for v in box)
    return ObjectState(left + (w - 1) / 2.0, top + (h - 1) / 2.0, 1.0)


def crop_resize_many(frame, states, box_size, dims):
    """Bilinear crops of many ``(x, y, s)`` boxes, each resized to ``dims``.

    Sample ``(i, j)`` of a box of size ``(w, h)`` centered at ``(x, y)``
    reads the frame at ``x - w/2 + (j + 0.5) w / N2`` and
    ``y - h/2 + (i + 0.5) h / N1``; reads outside the frame are clamped to
    the edge.
    """
    frame = np.asarray(frame, dtype=float)
    states = np.asarray(states, dtype=float).reshape(-1, 3)
    n1, n2 = dims
    height, width = frame.shape
    bw, bh = box_size
    w = states[:, 2] * bw
    h = states[:, 2] * bh
    cols = (states[:, 0] - w / 2.0)[:, None] + (np.arange(n2) + 0.5)[None, :] * (w / n2)[:, None]
    rows = (states[:, 1] - h / 2.0)[:, None] + (np.arange(n1) + 0.5)[None, :] * (h / n1)[:, None]
    cols = np.clip(cols, 0.0, width - 1)
    rows = np.clip(rows, 0.0, height - 1)
    c0 = np.floor(cols).astype(int)
    r0 = np.floor(rows).astype(int)
    fc = cols - c0
    fr = rows - r0
    c1 = np.minimum(c0 + 1, width - 1)
    r1 = np.minimum(r0 + 1, height - 1)
    top = (frame[r0[:, :, None], c0[:, None, :]] * (1.0 - fc)[:, None, :]
           + frame[r0[:, :, None], c1[:, None, :]] * fc[:, None, :])
    bottom = (frame[r1[:, :, None], c0[:, None, :]] * (1.0 - fc)[:, None, :]
              + frame[r1[:, :, None], c1[:, None, :]] * fc[:, None, :])
    return top * (1.0 - fr)[:, :, None] + bottom * fr[:, :, None]


def crop_resize(frame, state, box_size, dims):
    """Single-box version of :func:`crop_resize_many`."""
    return crop_resize_many(frame, state.as_array(), box_size, dims)[0]


def normalize_map(scores):
    """Min-max rescale to [0, 1]; a flat map becomes all zeros."""
    scores = np.asarray(scores, dtype=float)
    lo, hi = scores.min(), scores.max()
    if hi <= lo:
        return np.zeros_like(scores)
    return (scores - lo) / (hi - lo)


@dataclass(frozen=True)
class FrameResult:
    frame: int
    state: ObjectState
    score: float
    ms: float


class TrackerSession:
    """Tracking state for one sequence.

    Parameters
    ----------
    first_frame : ndarray
        First frame (any dtype accepted by :func:`to_gray`).
    box : (left, top, w, h)
        Initial object box in pixels.
    cfg : TrackerConfig, optional
    """

    def __init__(self, first_frame, box, cfg=None):
        t0 = time.perf_counter()
        self.cfg = cfg or TrackerConfig()
        frame = to_gray(first_frame)
        self.frame_shape = frame.shape
        left, top, w, h = (float(v) for v in box)
        if w < MIN_BOX or h < MIN_BOX:
            raise ValueError(f"box must be at least {MIN_BOX:g}x{MIN_BOX:g} pixels")
        height, width = frame.shape
        if left < 0 or top < 0 or left + w > width or top + h > height:
            raise ValueError(f"box {tuple(box)} lies outside the {width}x{height} frame")
        self.box_size = (w, h)
        self.params = self.cfg.likelihood_params()
        self.motion = self.cfg.motion_params()
        self.rng = np.random.default_rng(self.cfg.seed)
        self.state = box_to_state(box)
        self.frame_index = 0
        self.last_evaluations = 0

        dims = self.cfg.patch_dims
        jitter = self.cfg.init_jitter
        n_seed = max(self.cfg.k, self.cfg.n_positive)
        offsets = self.rng.integers(-jitter, jitter + 1, size=(n_seed, 2))
        seeds = np.tile(self.state.as_array(), (n_seed + 1, 1))
        seeds[1:, :2] += offsets
        seeds = clamp_states(seeds, self.frame_shape, self.box_size)
        self.pos = SampleBuffer(self.cfg.buffer_cap, dims).push(
            crop_resize_many(frame, seeds, self.box_size, dims))
        negatives = self._negative_states(self.state, max(self.cfg.k, self.cfg.n_negative))
        self.neg = SampleBuffer(self.cfg.buffer_cap, dims).push(
            crop_resize_many(frame, negatives, self.box_size, dims))

        patch = crop_resize(frame, self.state, self.box_size, dims)
        score = float(evaluate_many(patch[None], self.pos, self.neg, self.params)[0])
        self.history = [FrameResult(0, self.state, score, (time.perf_counter() - t0) * 1e3)]

    # -- candidate generation -------------------------------------------------

    def _box_ok(self, states):
        return (states[:, 2] * min(self.box_size)) >= MIN_BOX

    def _particles(self):
        particles = propagate(self.state, self.motion, self.rng, self.frame_shape, self.box_size)
        states = particles.states
        for _ in range(20):
            bad = ~self._box_ok(states)
            if not bad.any():
                break
            redraw = propagate(self.state, replace(self.motion, v=int(bad.sum())),
                               self.rng, self.frame_shape, self.box_size)
            states[bad] = redraw.states
        else:
            bad = ~self._box_ok(states)
            states[bad, 2] = MIN_BOX / min(self.box_size)
        return states

    def _grid(self, center, stride, radius, scales):
        n = int(radius // stride)
        offsets = stride * np.arange(-n, n + 1, dtype=float)
        xs, ys, ss = np.meshgrid(center.x + offsets, center.y + offsets,
                                 [center.s * f for f in scales], indexing="ij")
        states = np.stack([xs.ravel(), ys.ravel(), ss.ravel()], axis=1)
        states = states[self._box_ok(states)]
        states = clamp_states(states, self.frame_shape, self.box_size)
        # clamping can fold several grid points onto one box
        _, first = np.unique(states, axis=0, return_index=True)
        return states[np.sort(first)]

    def _negative_states(self, center, count):
        bw, bh = self.box_size
        extent = max(bw, bh) * center.s
        inner, outer = self.cfg.neg_inner * extent, self.cfg.neg_outer * extent
        kept, states = [], None
        for _ in range(10):
            drawn = select_negatives(center, self.rng, count - len(kept), inner, outer)
            states = clamp_states(np.array([s.as_array() for s in drawn]),
                                  self.frame_shape, self.box_size)
            dist = np.hypot(states[:, 0] - center.x, states[:, 1] - center.y)
            kept.extend(states[dist >= inner])
            if len(kept) >= count:
                break
        else:
            # frame too small for the annulus: accept clamped draws as they are
            kept.extend(states[: count - len(kept)])
        return np.array(kept[:count]).reshape(-1, 3)

    # -- per-frame update -------------------------------------------------------

    def _check_frame(self, frame):
        frame = to_gray(frame)
        if frame.shape != self.frame_shape:
            raise ValueError(f"frame shape {frame.shape} does not match {self.frame_shape}")
        return frame

    def _score(self, frame, states):
        patches = crop_resize_many(frame, states, self.box_size, self.cfg.patch_dims)
        scores = evaluate_many(patches, self.pos, self.neg, self.params)
        self.last_evaluations = len(states)
        return patches, scores

    def _advance(self, frame, states, t0):
        patches, scores = self._score(frame, states)
        particles = ParticleSet(states, scores)
        best = map_estimate(particles)
        best_score = float(np.max(scores))

        # positives: the candidates nearest to the new estimate
        dist = np.hypot(states[:, 0] - best.x, states[:, 1] - best.y)
        pos_idx = nearest_indices(dist, self.cfg.n_positive)
        negatives = self._negative_states(best, self.cfg.n_negative)
        neg_patches = crop_resize_many(frame, negatives, self.box_size, self.cfg.patch_dims)

        # buffers are replaced only after every candidate has been scored
        self.pos = self.pos.push(patches[pos_idx])
        self.neg = self.neg.push(neg_patches)
        self.state = best
        self.frame_index += 1
        result = FrameResult(self.frame_index, best, best_score,
                             (time.perf_counter() - t0) * 1e3)
        self.history.append(result)
        return result

    def step(self, frame):
        """Particle-filter update on the next frame."""
        t0 = time.perf_counter()
        frame = self._check_frame(frame)
        return self._advance(frame, self._particles(), t0)

    def step_sliding_window(self, frame):
        """Exhaustive grid search around the previous state on the next frame."""
        t0 = time.perf_counter()
        frame = self._check_frame(frame)
        grid = self._grid(self.state, self.cfg.sw_stride, self.cfg.sw_radius,
                          self.cfg.sw_scales)
        return self._advance(frame, grid, t0)

    def track(self, frame):
        """Dispatch on ``cfg.mode``."""
        if self.cfg.mode == "sliding":
            return self.step_sliding_window(frame)
        return self.step(frame)

    def confidence_map(self, frame, stride):
        """Scores of boxes at the current scale over the whole frame.

        Returns ``(scores, xs, ys)`` where ``scores[i, j]`` belongs to the box
        centered at ``(xs[j], ys[i])``.  The session is not modified.
        """
        frame = self._check_frame(frame)
        stride = max(1, int(stride))
        height, width = self.frame_shape
        bw, bh = self.box_size
        half_w, half_h = self.state.s * bw / 2.0, self.state.s * bh / 2.0
        xs = np.arange(half_w - 0.5, width - 0.5 - half_w + 1e-9, stride)
        ys = np.arange(half_h - 0.5, height - 0.5 - half_h + 1e-9, stride)
        if len(xs) == 0:
            xs = np.array([(width - 1) / 2.0])
        if len(ys) == 0:
            ys = np.array([(height - 1) / 2.0])
        gx, gy = np.meshgrid(xs, ys)
        states = np.stack([gx.ravel(), gy.ravel(), np.full(gx.size, self.state.s)], axis=1)
        patches = crop_resize_many(frame, states, self.box_size, self.cfg.patch_dims)
        scores = evaluate_many(patches, self.pos, self.neg, self.params)
        return scores.reshape(gx.shape), xs, ys

