"""Reconstruction likelihoods from KNN-restricted 3D-DCT representations.

A candidate patch ``tau`` is appended to its K nearest buffered samples,
the stack is transformed, truncated to its low frequencies and inverted.
How well the last reconstructed frame matches ``tau`` gives

    L = exp(-||tau - f*(:, :, K+1)||^2 / (2 gamma^2))

for the positive and the negative buffer.  The final score is
``sigmoid(L_pos - lam * L_neg)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .dctcore import dct2, dct_axis, make_basis
from .incremental import DctCache
from .representation import TruncationSpec, last_slice_error, truncate

__all__ = [
    "DEFAULT_TRUNCATION",
    "LikelihoodParams",
    "sigmoid",
    "knn",
    "knn_many",
    "reconstruction_likelihood",
    "discriminative_score",
    "evaluate",
    "evaluate_many",
]

DEFAULT_TRUNCATION = TruncationSpec(9, 9, 2)


@dataclass(frozen=True)
class LikelihoodParams:
    gamma_pos: float = 1.2
    gamma_neg: float = 1.2
    lam: float = 0.1
    k: int = 15
    trunc: TruncationSpec = field(default=DEFAULT_TRUNCATION)

    def __post_init__(self):
        if self.gamma_pos <= 0 or self.gamma_neg <= 0:
            raise ValueError("scaling factors must be positive")
        if self.lam < 0:
            raise ValueError("weight factor must be non-negative")
        if self.k < 1:
            raise ValueError("neighbour count must be >= 1")


def sigmoid(x):
    """Logistic function, overflow-free for large ``|x|``."""
    x = np.asarray(x, dtype=float)
    pos = x >= 0
    # exp of a non-positive number only
    e = np.exp(np.where(pos, -x, x))
    out = np.where(pos, 1.0 / (1.0 + e), e / (1.0 + e))
    return float(out) if out.ndim == 0 else out


def _sq_distances(buffer, taus):
    # ||t||^2 + ||p||^2 - 2 t.p, computed the same way for one or many taus
    flat = taus.reshape(len(taus), -1)
    cross = flat @ buffer.patches.reshape(len(buffer), -1).T
    d = buffer.sq_norms[None, :] - 2.0 * cross + np.einsum("ij,ij->i", flat, flat)[:, None]
    return np.maximum(d, 0.0)


def knn_many(buffer, taus, k):
    """Nearest-neighbour indices for each row of ``taus``.

    Returns a ``(V, min(k, len(buffer)))`` array, closest first by
    sum-squared pixel distance, ties going to the lower buffer index.
    """
    if len(buffer) == 0:
        raise ValueError("empty sample buffer")
    taus = np.asarray(taus, dtype=float)
    if taus.shape[1:] != buffer.dims:
        raise ValueError(f"patch shape {taus.shape[1:]} does not match {buffer.dims}")
    d = _sq_distances(buffer, taus)
    order = np.argsort(d, axis=1, kind="stable")
    return order[:, : min(int(k), len(buffer))]


def knn(buffer, tau, k):
    """Indices of the ``k`` buffered patches nearest to ``tau``."""
    tau = np.asarray(tau, dtype=float)
    return [int(i) for i in knn_many(buffer, tau[None], k)[0]]


def _clamped(trunc, depth):
    return TruncationSpec(trunc.delta_u, trunc.delta_v, min(trunc.delta_w, depth - 1))


def reconstruction_likelihood(neighbors, tau, gamma, trunc, *, neighbor_slices=None,
                              method="auto"):
    """Likelihood that ``tau`` is explained by its neighbour sequence.

    Parameters
    ----------
    neighbors : sequence of ndarray
        The K neighbour patches, nearest first.
    tau : ndarray
        Candidate patch, appended as the last frame.
    gamma : float
        Scaling factor of the Gaussian on the reconstruction error.
    trunc : TruncationSpec
        Low-frequency block to keep.  ``delta_w`` is clamped to the stack
        depth.
    neighbor_slices : sequence of ndarray, optional
        Cached 2D-DCT slices of ``neighbors``; when given, only ``tau``
        is transformed.
    """
    tau = np.asarray(tau, dtype=float)
    if neighbor_slices is None:
        if len(neighbors) == 0:
            raise ValueError("need at least one neighbour")
        cache = DctCache.from_patches(neighbors, method=method)
    else:
        if len(neighbor_slices) == 0:
            raise ValueError("need at least one neighbour")
        cache = DctCache(tau.shape, neighbor_slices)
    if cache.dims != tau.shape:
        raise ValueError(f"patch shape {tau.shape} does not match neighbours {cache.dims}")
    cache = cache.append(tau, method=method)
    coeffs = cache.coefficients(method=method)
    compact = truncate(coeffs, _clamped(trunc, cache.count))
    err = last_slice_error(compact, tau)
    return float(np.exp(-(err * err) / (2.0 * gamma * gamma)))


def discriminative_score(pos_like, neg_like, lam):
    """``sigmoid(pos_like - lam * neg_like)``."""
    return sigmoid(np.asarray(pos_like) - lam * np.asarray(neg_like))


def evaluate(tau, pos, neg, params):
    """Score one candidate patch against the positive and negative buffers."""
    tau = np.asarray(tau, dtype=float)
    likes = []
    for buffer, gamma in ((pos, params.gamma_pos), (neg, params.gamma_neg)):
        idx = knn(buffer, tau, params.k)
        likes.append(reconstruction_likelihood(
            buffer.patches[idx], tau, gamma, params.trunc,
            neighbor_slices=buffer.dct_slices[idx],
        ))
    return discriminative_score(likes[0], likes[1], params.lam)


def _likelihoods_many(taus, tau_low, buffer, gamma, trunc, k):
    n1, n2 = buffer.dims
    bu = min(trunc.delta_u, n1 - 1) + 1
    bv = min(trunc.delta_v, n2 - 1) + 1
    idx = knn_many(buffer, taus, k)
    depth = idx.shape[1] + 1
    dw = min(trunc.delta_w, depth - 1)
    # the spatial truncation commutes with the temporal transform, so only
    # the low block of each cached slice is needed
    low_slices = buffer.dct_slices[:, :bu, :bv]
    stack = np.concatenate([low_slices[idx], tau_low[:, None]], axis=1)
    coeffs = dct_axis(stack, 1)
    weights = make_basis(depth)[: dw + 1, depth - 1]
    last = np.einsum("vwij,w->vij", coeffs[:, : dw + 1], weights)
    recon = make_basis(n1)[:bu].T @ last @ make_basis(n2)[:bv]
    err2 = np.sum((taus - recon) ** 2, axis=(1, 2))
    return np.exp(-err2 / (2.0 * gamma * gamma))


def evaluate_many(taus, pos, neg, params, chunk=256):
    """Vectorised :func:`evaluate` over a stack of candidate patches.

    Equal to calling :func:`evaluate` on each row up to round-off.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 3:
        raise ValueError("taus must be a (V, N1, N2) stack")
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("both buffers need at least one sample")
    trunc = params.trunc
    n1, n2 = taus.shape[1:]
    bu = min(trunc.delta_u, n1 - 1) + 1
    bv = min(trunc.delta_v, n2 - 1) + 1
    scores = np.empty(len(taus))
    for start in range(0, len(taus), chunk):
        block = taus[start:start + chunk]
        tau_low = dct2(block)[:, :bu, :bv]
        lp = _likelihoods_many(block, tau_low, pos, params.gamma_pos, trunc, params.k)
        ln = _likelihoods_many(block, tau_low, neg, params.gamma_neg, trunc, params.k)
        scores[start:start + chunk] = discriminative_score(lp, ln, params.lam)
    return scores
