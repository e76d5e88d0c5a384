"""Deterministic synthetic tracking sequences with exact ground truth.

A smooth textured square moves at constant velocity over a static noise
background.  Optional extras: an occluding band that covers the target for
a range of frames, and a linear illumination ramp.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .dctcore import idct2

__all__ = ["SyntheticSpec", "make_sequence", "write_sequence"]

OCCLUDERS = ("stripes", "flat", "noise")


@dataclass(frozen=True)
class SyntheticSpec:
    width: int = 320
    height: int = 240
    frames: int = 50
    size: int = 32
    start: tuple = (40, 40)
    velocity: tuple = (4, 3)  # |v| = 5 px/frame
    background_mean: float = 0.45
    background_std: float = 0.12
    sensor_noise: float = 0.01
    occlusion: bool = False
    occlusion_frames: tuple = (20, 25)
    occluder: str = "stripes"  # "stripes", "flat" or "noise"
    illumination_drop: float = 0.0  # fraction of brightness lost by the last frame

    def __post_init__(self):
        if self.occluder not in OCCLUDERS:
            raise ValueError(f"occluder must be one of {OCCLUDERS}, got {self.occluder!r}")
        if self.frames < 1 or self.size < 1:
            raise ValueError("need at least one frame and a positive target size")
        if not 0.0 <= self.illumination_drop <= 1.0:
            raise ValueError("illumination_drop must lie in [0, 1]")


def _texture(rng, size):
    # random low-frequency DCT content gives a smooth but non-trivial pattern
    coeffs = np.zeros((size, size))
    coeffs[:5, :5] = rng.normal(size=(5, 5))
    coeffs[0, 0] = 0.0
    tex = idct2(coeffs)
    tex = (tex - tex.min()) / (tex.max() - tex.min())
    return 0.15 + 0.8 * tex


def _occluder_band(spec, tops):
    first, last = spec.occlusion_frames
    span = tops[first:last + 1]
    return int(span.min()) - 4, int(span.max()) + spec.size + 4


def make_sequence(spec=SyntheticSpec(), seed=0):
    """Render the sequence.

    Returns
    -------
    frames : list of ndarray
        ``uint8`` grayscale frames.
    truth : ndarray, shape (frames, 5)
        Rows ``(frame, cx, cy, w, h)``; centers use pixel-center coordinates.
    """
    rng = np.random.default_rng(seed)
    texture = _texture(rng, spec.size)
    background = np.clip(
        rng.normal(spec.background_mean, spec.background_std, (spec.height, spec.width)),
        0.0, 1.0)
    stripes = np.where((np.arange(spec.width) // 3) % 2 == 0, 0.2, 0.8)

    t = np.arange(spec.frames)
    lefts = spec.start[0] + spec.velocity[0] * t
    tops = spec.start[1] + spec.velocity[1] * t
    if (lefts.min() < 0 or tops.min() < 0 or lefts.max() + spec.size > spec.width
            or tops.max() + spec.size > spec.height):
        raise ValueError("trajectory leaves the frame")
    band = _occluder_band(spec, tops) if spec.occlusion else None

    frames, truth = [], []
    for i in range(spec.frames):
        img = background.copy()
        x0, y0 = int(lefts[i]), int(tops[i])
        img[y0:y0 + spec.size, x0:x0 + spec.size] = texture
        if band is not None and spec.occlusion_frames[0] <= i <= spec.occlusion_frames[1]:
            rows = slice(max(0, band[0]), band[1])
            if spec.occluder == "flat":
                img[rows, :] = spec.background_mean
            elif spec.occluder == "noise":
                img[rows, :] = np.clip(rng.normal(spec.background_mean, spec.background_std,
                                                  img[rows, :].shape), 0.0, 1.0)
            else:
                img[rows, :] = stripes
        img = img + rng.normal(0.0, spec.sensor_noise, img.shape)
        if spec.illumination_drop:
            img = img * (1.0 - spec.illumination_drop * i / max(1, spec.frames - 1))
        frames.append(np.round(np.clip(img, 0.0, 1.0) * 255).astype(np.uint8))
        truth.append((i, x0 + (spec.size - 1) / 2.0, y0 + (spec.size - 1) / 2.0,
                      spec.size, spec.size))
    return frames, np.array(truth, dtype=float)


def write_sequence(frames, truth, out_dir):
    """Write frames as ``frame_0000.pgm`` ... and ``groundtruth.txt``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames):
        Image.fromarray(frame).save(out / f"frame_{i:04d}.pgm")
    lines = ["# frame cx cy w h"]
    lines += [" ".join([str(int(r[0]))] + [repr(float(v)) for v in r[1:]]) for r in truth]
    (out / "groundtruth.txt").write_text("\n".join(lines) + "\n")
    return out
