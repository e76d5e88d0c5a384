"""Orthonormal DCT-II in one, two and three dimensions.

Every transform is a chain of mode-m products with cosine basis matrices

    a(u, x) = alpha(u) * cos(pi * (2x + 1) * u / (2n)),
    alpha(0) = sqrt(1/n),  alpha(u > 0) = sqrt(2/n),

so ``dct3(F) = F x1 A1 x2 A2 x3 A3`` and the inverse uses the transposes.
Each single-axis pass can run either as a dense matrix product or through
an FFT of the even-reordered signal; both give the same numbers to
round-off and callers never need to pick one.

Arrays are plain float64 ndarrays.  The 2D transforms act on the last two
axes and the 3D transforms on the last three, so leading axes behave as
batch dimensions.
"""

from functools import lru_cache

import numpy as np

__all__ = [
    "make_basis",
    "mode_product",
    "dct_axis",
    "idct_axis",
    "dct1",
    "idct1",
    "dct2",
    "idct2",
    "dct3",
    "idct3",
    "METHODS",
]

METHODS = ("auto", "matrix", "fft")

# "auto" switches to the FFT pass above this length.  Below it a BLAS
# matrix product wins on one core (numpy 2.2 / OpenBLAS: the crossover
# sits between 256 and 512).
FFT_THRESHOLD = 384


@lru_cache(maxsize=None)
def make_basis(n):
    """Return the ``n x n`` orthonormal DCT-II basis matrix.

    Row ``u`` holds the ``u``-th cosine basis function sampled at
    ``x = 0..n-1``.  The result is cached per ``n`` and marked read-only,
    so it can be shared freely between threads.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"basis length must be >= 1, got {n}")
    u = np.arange(n, dtype=float)[:, None]
    x = np.arange(n, dtype=float)[None, :]
    basis = np.cos(np.pi * (2.0 * x + 1.0) * u / (2.0 * n))
    basis[0, :] *= np.sqrt(1.0 / n)
    basis[1:, :] *= np.sqrt(2.0 / n)
    basis.setflags(write=False)
    return basis


def mode_product(t, m, phi):
    """Mode-``m`` product of a tensor with a matrix.

    Parameters
    ----------
    t : array_like
        Tensor of order ``M >= m``.
    m : int
        1-based mode index.
    phi : array_like
        Matrix of shape ``(J, I)`` where ``I == t.shape[m - 1]``.

    Returns
    -------
    ndarray
        Tensor with axis ``m - 1`` replaced by an axis of length ``J``:
        ``out[..., j, ...] = sum_i t[..., i, ...] * phi[j, i]``.
    """
    t = np.asarray(t, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2:
        raise ValueError("phi must be a matrix")
    if not 1 <= m <= t.ndim:
        raise ValueError(f"mode {m} out of range for a tensor of order {t.ndim}")
    if phi.shape[1] != t.shape[m - 1]:
        raise ValueError(
            f"mode-{m} size mismatch: tensor has {t.shape[m - 1]}, "
            f"matrix expects {phi.shape[1]}"
        )
    out = np.tensordot(phi, t, axes=([1], [m - 1]))
    return np.moveaxis(out, 0, m - 1)


def _use_fft(n, method):
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "auto":
        return n > FFT_THRESHOLD
    return method == "fft"


def _matrix_pass(x, axis, basis):
    moved = np.moveaxis(x, axis, -1)
    return np.moveaxis(moved @ basis.T, -1, axis)


@lru_cache(maxsize=None)
def _fft_plan(n):
    # alpha(k) * cos(theta_k), alpha(k) * sin(theta_k), theta_k = pi k / 2n
    k = np.arange(n, dtype=float)
    alpha = np.full(n, np.sqrt(2.0 / n))
    alpha[0] = np.sqrt(1.0 / n)
    theta = np.pi * k / (2.0 * n)
    cos_w = alpha * np.cos(theta)
    sin_w = alpha * np.sin(theta)
    for arr in (alpha, cos_w, sin_w):
        arr.setflags(write=False)
    return alpha, cos_w, sin_w


def _fft_dct(x, axis):
    # Even samples forward, odd samples reversed; one real FFT of that
    # sequence carries the whole cosine sum:
    #   C_k = alpha_k * Re(exp(-i theta_k) V_k).
    n = x.shape[axis]
    _, cos_w, sin_w = _fft_plan(n)
    x = np.moveaxis(x, axis, -1)
    v = np.concatenate([x[..., 0::2], x[..., 1::2][..., ::-1]], axis=-1)
    spec = np.fft.rfft(v, axis=-1)
    re, im = spec.real, spec.imag
    half = n // 2 + 1
    out = np.empty(v.shape)
    out[..., :half] = re * cos_w[:half] + im * sin_w[:half]
    if n > half:
        # V_k = conj(V_{n-k}) for the upper half
        out[..., half:] = (re[..., n - half:0:-1] * cos_w[half:]
                           - im[..., n - half:0:-1] * sin_w[half:])
    return np.moveaxis(out, -1, axis)


def _fft_idct(c, axis):
    n = c.shape[axis]
    alpha, cos_w, sin_w = _fft_plan(n)
    c = np.moveaxis(c, axis, -1)
    half = n // 2 + 1
    # X_k = C_k / alpha_k; V_k = (X_k - i X_{n-k}) exp(i theta_k), X_n := 0
    x_lo = c[..., :half] / alpha[:half]
    x_hi = np.zeros_like(x_lo)
    x_hi[..., 1:] = c[..., n - 1:n - half:-1] / alpha[n - 1:n - half:-1]
    cos_t = cos_w[:half] / alpha[:half]
    sin_t = sin_w[:half] / alpha[:half]
    spec = np.empty(x_lo.shape, dtype=complex)
    spec.real = x_lo * cos_t + x_hi * sin_t
    spec.imag = x_lo * sin_t - x_hi * cos_t
    v = np.fft.irfft(spec, n=n, axis=-1)
    out = np.empty(v.shape)
    split = (n + 1) // 2
    out[..., 0::2] = v[..., :split]
    out[..., 1::2] = v[..., split:][..., ::-1]
    return np.moveaxis(out, -1, axis)


def dct_axis(x, axis=-1, method="auto"):
    """Orthonormal DCT-II of ``x`` along a single axis."""
    x = np.asarray(x, dtype=float)
    n = x.shape[axis]
    if _use_fft(n, method):
        return _fft_dct(x, axis)
    return _matrix_pass(x, axis, make_basis(n))


def idct_axis(c, axis=-1, method="auto"):
    """Inverse of :func:`dct_axis` (orthonormal DCT-III)."""
    c = np.asarray(c, dtype=float)
    n = c.shape[axis]
    if _use_fft(n, method):
        return _fft_idct(c, axis)
    return _matrix_pass(c, axis, make_basis(n).T)


def dct1(f, method="auto"):
    """1D DCT, ``C = A1 f``."""
    return dct_axis(f, -1, method)


def idct1(c, method="auto"):
    """1D inverse DCT, ``f = A1^T C``."""
    return idct_axis(c, -1, method)


def dct2(f, method="auto"):
    """2D DCT over the last two axes, ``C = A1 F A2^T``."""
    f = np.asarray(f, dtype=float)
    if f.ndim < 2:
        raise ValueError("dct2 needs at least two dimensions")
    return dct_axis(dct_axis(f, -2, method), -1, method)


def idct2(c, method="auto"):
    """2D inverse DCT over the last two axes, ``F = A1^T C A2``."""
    c = np.asarray(c, dtype=float)
    if c.ndim < 2:
        raise ValueError("idct2 needs at least two dimensions")
    return idct_axis(idct_axis(c, -2, method), -1, method)


def dct3(t, method="auto"):
    """3D DCT over the last three axes, ``F x1 A1 x2 A2 x3 A3``."""
    t = np.asarray(t, dtype=float)
    if t.ndim < 3:
        raise ValueError("dct3 needs at least three dimensions")
    out = dct_axis(t, -3, method)
    out = dct_axis(out, -2, method)
    return dct_axis(out, -1, method)


def idct3(c, method="auto"):
    """3D inverse DCT over the last three axes (transposed bases)."""
    c = np.asarray(c, dtype=float)
    if c.ndim < 3:
        raise ValueError("idct3 needs at least three dimensions")
    out = idct_axis(c, -3, method)
    out = idct_axis(out, -2, method)
    return idct_axis(out, -1, method)
