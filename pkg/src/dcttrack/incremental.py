"""Incremental 3D-DCT over a growing stack of frames.

The cache keeps ``D = F x1 A1 x2 A2``, one 2D-DCT slice per frame.
Appending a frame costs a single 2D-DCT; the 3D coefficients of the
whole stack are then one 1D-DCT along time.
"""

import numpy as np

from .dctcore import dct2, dct_axis

__all__ = ["DctCache"]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class DctCache:
    """Immutable stack of per-frame 2D-DCT coefficient slices.

    Parameters
    ----------
    dims : tuple of int
        Patch shape ``(N1, N2)``.
    slices : sequence of ndarray, optional
        Precomputed 2D-DCT slices, oldest first.  They are copied and
        frozen unless already read-only float arrays of the right shape.
    """

    __slots__ = ("dims", "_slices")

    def __init__(self, dims, slices=()):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 2 or min(dims) < 1:
            raise ValueError(f"dims must be two positive integers, got {dims}")
        self.dims = dims
        frozen = []
        for s in slices:
            if isinstance(s, np.ndarray) and not s.flags.writeable and s.dtype == float:
                arr = s
            else:
                arr = _frozen(s)
            if arr.shape != dims:
                raise ValueError(f"slice shape {arr.shape} does not match {dims}")
            frozen.append(arr)
        self._slices = tuple(frozen)

    @classmethod
    def from_patches(cls, patches, method="auto"):
        """Build a cache by appending ``patches`` one at a time."""
        patches = [np.asarray(p, dtype=float) for p in patches]
        if not patches:
            raise ValueError("need at least one patch to infer dims")
        cache = cls(patches[0].shape)
        for p in patches:
            cache = cache.append(p, method=method)
        return cache

    @property
    def count(self):
        return len(self._slices)

    @property
    def slices(self):
        return self._slices

    def __len__(self):
        return len(self._slices)

    def __repr__(self):
        return f"DctCache(dims={self.dims}, count={self.count})"

    def append(self, tau, method="auto"):
        """Return a new cache with the 2D-DCT of ``tau`` added at the end.

        Existing slices are shared, not recomputed.
        """
        tau = np.asarray(tau, dtype=float)
        if tau.shape != self.dims:
            raise ValueError(f"patch shape {tau.shape} does not match {self.dims}")
        new = _frozen(dct2(tau, method=method))
        out = DctCache.__new__(DctCache)
        out.dims = self.dims
        out._slices = self._slices + (new,)
        return out

    def evict_front(self, keep):
        """Keep only the last ``keep`` slices (all of them if fewer)."""
        keep = int(keep)
        if keep < 1:
            raise ValueError(f"keep must be >= 1, got {keep}")
        if keep >= self.count:
            return self
        out = DctCache.__new__(DctCache)
        out.dims = self.dims
        out._slices = self._slices[-keep:]
        return out

    def stack(self):
        """The slices as one ``(N1, N2, N3)`` array."""
        if not self._slices:
            raise ValueError("empty cache")
        return np.moveaxis(np.stack(self._slices, axis=0), 0, -1)

    def coefficients(self, method="auto"):
        """3D-DCT coefficients of the cached frame sequence.

        Returns an ``(N1, N2, N3)`` array equal to ``dct3`` of the stacked
        source frames; the temporal basis is the one for the current
        depth ``N3``.
        """
        if not self._slices:
            raise ValueError("cannot take coefficients of an empty cache")
        d = np.stack(self._slices, axis=0)
        return np.moveaxis(dct_axis(d, 0, method), 0, -1)
