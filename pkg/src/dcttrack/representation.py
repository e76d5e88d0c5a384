"""Compact object representation by low-frequency truncation.

Only the corner block ``u <= delta_u, v <= delta_v, w <= delta_w`` of a
3D-DCT coefficient tensor is kept.  Reconstruction multiplies that block by
the leading columns of the transposed bases, which is the same as
zero-padding back to full size and applying ``idct3``.
"""

from dataclasses import dataclass

import numpy as np

from .dctcore import make_basis, mode_product

__all__ = [
    "TruncationSpec",
    "CompactCoeffs",
    "truncate",
    "reconstruct",
    "reconstruct_slice",
    "last_slice_error",
    "discarded_energy",
]


@dataclass(frozen=True)
class TruncationSpec:
    """Inclusive frequency cutoffs along the three axes."""

    delta_u: int
    delta_v: int
    delta_w: int

    def __post_init__(self):
        for name in ("delta_u", "delta_v", "delta_w"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def deltas(self):
        return (self.delta_u, self.delta_v, self.delta_w)

    @property
    def block_shape(self):
        return tuple(d + 1 for d in self.deltas)

    def check(self, dims):
        for axis, (d, n) in enumerate(zip(self.deltas, dims)):
            if d >= n:
                raise ValueError(
                    f"cutoff {d} on axis {axis} out of range for dimension {n}"
                )

    def clamp(self, dims):
        """Spec with every cutoff limited to ``dim - 1``."""
        return TruncationSpec(*(min(d, n - 1) for d, n in zip(self.deltas, dims)))

    @classmethod
    def lossless(cls, dims):
        return cls(*(n - 1 for n in dims))


@dataclass(frozen=True)
class CompactCoeffs:
    """Retained low-frequency block of a coefficient tensor.

    ``kept`` has shape ``spec.block_shape``; ``dims`` is the full tensor
    shape the block came from.
    """

    spec: TruncationSpec
    dims: tuple
    kept: np.ndarray

    def __post_init__(self):
        if self.kept.shape != self.spec.block_shape:
            raise ValueError(
                f"kept block {self.kept.shape} does not match {self.spec.block_shape}"
            )

    def _check_compatible(self, other):
        if self.spec != other.spec or tuple(self.dims) != tuple(other.dims):
            raise ValueError("compact coefficients have different specs or dims")

    def __add__(self, other):
        self._check_compatible(other)
        return CompactCoeffs(self.spec, self.dims, self.kept + other.kept)

    def __mul__(self, scalar):
        return CompactCoeffs(self.spec, self.dims, self.kept * float(scalar))

    __rmul__ = __mul__


def truncate(c, spec):
    """Keep the low-frequency corner block of a 3D coefficient tensor."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 3:
        raise ValueError(f"expected a 3D tensor, got shape {c.shape}")
    spec.check(c.shape)
    du, dv, dw = spec.deltas
    kept = np.array(c[: du + 1, : dv + 1, : dw + 1])
    return CompactCoeffs(spec, tuple(c.shape), kept)


def reconstruct(cc):
    """Approximate signal ``F*`` of full size from the kept block."""
    n1, n2, n3 = cc.dims
    du, dv, dw = cc.spec.deltas
    out = mode_product(cc.kept, 1, make_basis(n1)[: du + 1].T)
    out = mode_product(out, 2, make_basis(n2)[: dv + 1].T)
    return mode_product(out, 3, make_basis(n3)[: dw + 1].T)


def reconstruct_slice(cc, z=-1):
    """Frame ``z`` of :func:`reconstruct` without building the others."""
    n1, n2, n3 = cc.dims
    du, dv, dw = cc.spec.deltas
    z = range(n3)[z]
    weights = make_basis(n3)[: dw + 1, z]
    low = np.tensordot(cc.kept, weights, axes=([2], [0]))
    a1 = make_basis(n1)[: du + 1]
    a2 = make_basis(n2)[: dv + 1]
    return a1.T @ low @ a2


def last_slice_error(cc, tau):
    """Frobenius distance between ``tau`` and the last reconstructed frame."""
    tau = np.asarray(tau, dtype=float)
    if tau.shape != tuple(cc.dims[:2]):
        raise ValueError(f"patch shape {tau.shape} does not match {cc.dims[:2]}")
    return float(np.linalg.norm(tau - reconstruct_slice(cc, -1)))


def discarded_energy(c, spec):
    """Sum of squares of the coefficients that ``truncate`` would drop."""
    c = np.asarray(c, dtype=float)
    du, dv, dw = spec.deltas
    dropped = np.ones(c.shape, dtype=bool)
    dropped[: du + 1, : dv + 1, : dw + 1] = False
    return float(np.sum(c[dropped] ** 2))
