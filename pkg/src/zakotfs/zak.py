"""Discrete Zak transform (DZT) and its relatives.

Conventions used throughout the package:

* A KL-periodic sequence is stored as one period, a 1-D complex array of
  length ``N = K * L``.
* A Zak grid is the fundamental rectangle, an ``(L, K)`` array with
  ``Z[n, k]`` for ``0 <= n < L`` (delay) and ``0 <= k < K`` (Doppler).
  Anything outside the rectangle is reached through :func:`eval_extended`.
* All transforms are unitary.
* Inner products conjugate the second argument.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class DimensionError(ValueError):
    """Raised when a sequence or grid does not match the requested shape."""


class GridShape(NamedTuple):
    """Factorisation of the sequence period ``N = K * L``."""

    K: int
    L: int

    @property
    def N(self) -> int:
        return self.K * self.L

    def validate(self) -> "GridShape":
        if int(self.K) != self.K or int(self.L) != self.L or self.K < 1 or self.L < 1:
            raise DimensionError(f"K and L must be positive integers, got {tuple(self)}")
        return self


def _as_shape(shape) -> GridShape:
    return GridShape(*shape).validate()


def _as_sequence(x, shape: GridShape | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1:
        raise DimensionError(f"expected a 1-D sequence, got shape {x.shape}")
    if shape is not None and x.size != shape.N:
        raise DimensionError(
            f"sequence length {x.size} does not match period K*L = {shape.N}"
        )
    return x


def _as_grid(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or 0 in Z.shape:
        raise DimensionError(f"expected an (L, K) grid, got shape {Z.shape}")
    return Z


def grid_shape(Z) -> GridShape:
    """Return the :class:`GridShape` of an ``(L, K)`` Zak grid."""
    L, K = np.shape(Z)
    return GridShape(K, L)


# ---------------------------------------------------------------------------
# DFT

def dft(x) -> np.ndarray:
    """Unitary DFT of one period of ``x``."""
    return np.fft.fft(_as_sequence(x), norm="ortho")


def idft(X) -> np.ndarray:
    """Inverse of :func:`dft`."""
    return np.fft.ifft(_as_sequence(X), norm="ortho")


# ---------------------------------------------------------------------------
# DZT

def dzt(x, shape) -> np.ndarray:
    """Discrete Zak transform of a KL-periodic sequence.

    Parameters
    ----------
    x : array_like
        One period of the sequence, length ``K * L``.
    shape : GridShape or (K, L)
        Factorisation of the period.

    Returns
    -------
    numpy.ndarray
        ``(L, K)`` grid with
        ``Z[n, k] = K**-0.5 * sum_l x[n + l*L] * exp(-2j*pi*k*l/K)``.
    """
    shape = _as_shape(shape)
    x = _as_sequence(x, shape)
    # rows of the reshape are the polyphase index l, columns the offset n
    return np.fft.fft(x.reshape(shape.K, shape.L), axis=0, norm="ortho").T


def idzt(Z) -> np.ndarray:
    """Inverse DZT: recover one period of the sequence from its fundamental rectangle."""
    Z = _as_grid(Z)
    return np.fft.ifft(Z.T, axis=0, norm="ortho").reshape(-1)


def dzt_from_dft(X, shape) -> np.ndarray:
    """DZT computed directly from the unitary DFT of the sequence.

    ``Z[n, k] = L**-0.5 * sum_l X[k + l*K] * exp(2j*pi*(k + l*K)*n/(K*L))``
    """
    shape = _as_shape(shape)
    X = _as_sequence(X, shape)
    n = np.arange(shape.L)[:, None]
    k = np.arange(shape.K)[None, :]
    inner = np.fft.ifft(X.reshape(shape.L, shape.K), axis=0, norm="ortho")
    return inner * np.exp(2j * np.pi * n * k / shape.N)


def dft_from_dzt(Z) -> np.ndarray:
    """Unitary DFT of the sequence, computed from its DZT.

    This is the Cooley-Tukey style factorisation: ``K`` phase-twisted DFTs of
    length ``L`` taken along the delay axis.
    """
    Z = _as_grid(Z)
    shape = grid_shape(Z)
    n = np.arange(shape.L)[:, None]
    k = np.arange(shape.K)[None, :]
    twisted = Z * np.exp(-2j * np.pi * n * k / shape.N)
    # output row l, column k0 holds X[k0 + l*K]
    return np.fft.fft(twisted, axis=0, norm="ortho").reshape(-1)


def eval_extended(Z, n, k):
    """Evaluate a DZT at arbitrary integer indices.

    Uses periodicity in ``k`` (period ``K``) and quasi-periodicity in ``n``:
    ``Z[n + m*L, k] = exp(2j*pi*k*m/K) * Z[n, k]``. ``m`` is floor division,
    so ``n = -1`` maps to ``(L - 1, m = -1)``. ``n`` and ``k`` may be integer
    arrays, broadcast against each other.
    """
    Z = _as_grid(Z)
    L, K = Z.shape
    n = np.asarray(n)
    k = np.asarray(k)
    m, n0 = np.divmod(n, L)
    k0 = np.mod(k, K)
    out = np.exp(2j * np.pi * k0 * m / K) * Z[n0, k0]
    return out[()] if out.ndim == 0 else out


def basis_sequence(n0: int, k0: int, shape) -> np.ndarray:
    """Sequence whose DZT is one-hot at ``(n0, k0)``.

    A delayed, modulated impulse train: spacing ``L``, amplitude ``1/sqrt(K)``.
    """
    shape = _as_shape(shape)
    if not (0 <= n0 < shape.L and 0 <= k0 < shape.K):
        raise DimensionError(
            f"index ({n0}, {k0}) outside the fundamental rectangle {shape.L}x{shape.K}"
        )
    v = np.zeros(shape.N, dtype=complex)
    l = np.arange(shape.K)
    v[n0 + l * shape.L] = np.exp(2j * np.pi * k0 * l / shape.K) / np.sqrt(shape.K)
    return v


# ---------------------------------------------------------------------------
# Signal transform properties, evaluated in the Zak domain

def shift_in_zak(Z, m: int) -> np.ndarray:
    """DZT of the sequence delayed by ``m`` samples, i.e. ``Z[n - m, k]``."""
    Z = _as_grid(Z)
    L, K = Z.shape
    n = np.arange(L)[:, None] - int(m)
    return eval_extended(Z, n, np.arange(K)[None, :])


def _check_same(Zx, Zy):
    Zx, Zy = _as_grid(Zx), _as_grid(Zy)
    if Zx.shape != Zy.shape:
        raise DimensionError(f"grid shapes differ: {Zx.shape} vs {Zy.shape}")
    return Zx, Zy


def zak_modulate(Zx, Zy) -> np.ndarray:
    """DZT of the elementwise product ``x * y``.

    Scaled circular convolution along ``k``:
    ``Zz[n, k] = K**-0.5 * sum_l Zx[n, l] * Zy[n, k - l]``.
    """
    Zx, Zy = _check_same(Zx, Zy)
    K = Zx.shape[1]
    spec = np.fft.fft(Zx, axis=1) * np.fft.fft(Zy, axis=1)
    return np.fft.ifft(spec, axis=1) / np.sqrt(K)


def zak_convolve(Zx, Zy) -> np.ndarray:
    """DZT of the circular convolution ``x (*) y``.

    ``Zz[n, k] = sqrt(K) * sum_m Zx[m, k] * Zy[n - m, k]`` where ``n - m``
    wraps quasi-periodically. A phase ramp of ``exp(-2j*pi*k*n/(K*L))`` makes
    both factors plainly periodic in ``n``, so the sum becomes an ordinary
    circular convolution along the delay axis.
    """
    Zx, Zy = _check_same(Zx, Zy)
    L, K = Zx.shape
    ramp = np.exp(-2j * np.pi * np.arange(L)[:, None] * np.arange(K)[None, :] / (K * L))
    spec = np.fft.fft(Zx * ramp, axis=0) * np.fft.fft(Zy * ramp, axis=0)
    return np.sqrt(K) * np.fft.ifft(spec, axis=0) / ramp


# ---------------------------------------------------------------------------
# Product relations

def expansion_coefficients(x, y, shape) -> np.ndarray:
    """Inner products of ``x`` with the time-frequency shifts of ``y``.

    Returns a ``(K, L)`` matrix ``C[m, l] = <x, y_{m,l}>`` with
    ``y_{m,l}[n] = y[n - m*L] * exp(2j*pi*l*n/L)``, computed from the DZTs as
    ``sum_n sum_k Zx[n,k] conj(Zy[n,k]) exp(2j*pi*(m*k/K - l*n/L))``.
    """
    shape = _as_shape(shape)
    x = _as_sequence(x, shape)
    y = _as_sequence(y, shape)
    P = dzt(x, shape) * np.conj(dzt(y, shape))
    # sum over k with +j kernel, then over n with -j kernel
    C = shape.K * np.fft.fft(np.fft.ifft(P, axis=1), axis=0)
    return C.T


def zak_product(C) -> np.ndarray:
    """Inverse of :func:`expansion_coefficients`: recover ``Zx * conj(Zy)``.

    ``C`` is the ``(K, L)`` coefficient matrix; the result is ``(L, K)``.
    """
    C = np.asarray(C, dtype=complex)
    K, L = C.shape
    # (1/KL) sum_m sum_l C[m,l] exp(-2j*pi*(k*m/K - n*l/L))
    return (np.fft.ifft(np.fft.fft(C, axis=0), axis=1) * L / (K * L)).T
