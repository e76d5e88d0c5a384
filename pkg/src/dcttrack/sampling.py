"""Training-sample selection and the capped positive/negative buffers."""

from dataclasses import dataclass

import numpy as np

from .dctcore import dct2
from .motion import ObjectState

__all__ = [
    "SampleBuffer",
    "LabeledState",
    "select_positives",
    "select_negatives",
    "nearest_indices",
]


def _readonly(a):
    a.setflags(write=False)
    return a


class SampleBuffer:
    """Bounded FIFO of patches with their cached 2D-DCT slices.

    The buffer is a value: :meth:`push` returns a new buffer and leaves
    this one untouched, so a reference taken at the start of a frame is a
    stable snapshot.  Alongside each patch it caches the 2D-DCT slice and
    the squared norm used by nearest-neighbour search.
    """

    __slots__ = ("cap", "dims", "patches", "dct_slices", "sq_norms")

    def __init__(self, cap, dims, patches=None, dct_slices=None, sq_norms=None):
        cap = int(cap)
        if cap < 1:
            raise ValueError(f"buffer cap must be >= 1, got {cap}")
        self.cap = cap
        self.dims = tuple(int(d) for d in dims)
        if patches is None:
            patches = np.empty((0,) + self.dims)
        patches = np.asarray(patches, dtype=float)
        if patches.shape[1:] != self.dims:
            raise ValueError(f"patch shape {patches.shape[1:]} does not match {self.dims}")
        if dct_slices is None:
            dct_slices = dct2(patches) if len(patches) else np.empty_like(patches)
        if sq_norms is None:
            sq_norms = np.einsum("nij,nij->n", patches, patches)
        self.patches = _readonly(patches)
        self.dct_slices = _readonly(np.asarray(dct_slices, dtype=float))
        self.sq_norms = _readonly(np.asarray(sq_norms, dtype=float))

    def __len__(self):
        return len(self.patches)

    def __repr__(self):
        return f"SampleBuffer(cap={self.cap}, dims={self.dims}, len={len(self)})"

    def push(self, new_patches):
        """Append patches in order, dropping the oldest beyond ``cap``."""
        new = np.asarray(new_patches, dtype=float)
        if new.ndim == 2:
            new = new[None]
        if new.shape[1:] != self.dims:
            raise ValueError(f"patch shape {new.shape[1:]} does not match {self.dims}")
        if len(new) == 0:
            return self
        new_dct = dct2(new)
        new_norms = np.einsum("nij,nij->n", new, new)
        keep = self.cap
        return SampleBuffer(
            self.cap,
            self.dims,
            np.concatenate([self.patches, new])[-keep:],
            np.concatenate([self.dct_slices, new_dct])[-keep:],
            np.concatenate([self.sq_norms, new_norms])[-keep:],
        )


@dataclass(frozen=True)
class LabeledState:
    state: ObjectState
    distance_to_object: float

    def __post_init__(self):
        if not self.distance_to_object >= 0:
            raise ValueError("distance must be non-negative")


def select_positives(states, count):
    """The ``count`` states closest to the object, nearest first.

    Ties keep their original (draw) order.
    """
    if not states:
        raise ValueError("no candidate states")
    order = nearest_indices([s.distance_to_object for s in states], count)
    return [states[i].state for i in order]


def nearest_indices(distances, count):
    """Indices of the ``count`` smallest distances, ascending, stable."""
    order = np.argsort(np.asarray(distances, dtype=float), kind="stable")
    return [int(i) for i in order[: max(0, int(count))]]


def select_negatives(center, rng, count, inner_radius, outer_radius):
    """States drawn uniformly from the annulus around ``center``.

    Scale is copied from ``center``.
    """
    if not 0 < inner_radius < outer_radius:
        raise ValueError(
            f"need 0 < inner_radius < outer_radius, got {inner_radius}, {outer_radius}"
        )
    # area-uniform: r^2 uniform between the squared radii
    r = np.sqrt(rng.uniform(inner_radius**2, outer_radius**2, size=count))
    theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
    xs = center.x + r * np.cos(theta)
    ys = center.y + r * np.sin(theta)
    return [ObjectState(float(x), float(y), center.s) for x, y in zip(xs, ys)]

