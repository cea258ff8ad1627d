"""OTFS as an overlay on pulse-shaping OFDM.

Delay-Doppler grids are ``(L, K)`` arrays as in :mod:`zakotfs.zak`.
Time-frequency frames are ``(K, L)``: ``A[m, l]`` is symbol ``m`` on
subcarrier ``l``.
"""

from __future__ import annotations

import numpy as np

from .zak import DimensionError, dzt, grid_shape, idzt


def isfft(Z) -> np.ndarray:
    """Map a delay-Doppler grid to a time-frequency frame.

    ``A[m, l] = (KL)**-0.5 * sum_n sum_k Z[n, k] exp(2j*pi*(m*k/K - l*n/L))``
    """
    Z = np.asarray(Z, dtype=complex)
    # +j kernel over k, -j kernel over n
    A = np.fft.fft(np.fft.ifft(Z, axis=1, norm="ortho"), axis=0, norm="ortho")
    return A.T


def sfft(A) -> np.ndarray:
    """Inverse of :func:`isfft`: time-frequency frame back to the delay-Doppler grid."""
    A = np.asarray(A, dtype=complex)
    Z = np.fft.ifft(np.fft.fft(A, axis=0, norm="ortho"), axis=1, norm="ortho")
    return Z.T


def ofdm_modulate(A, g) -> np.ndarray:
    """Pulse-shaping OFDM (Heisenberg) modulation of a frame.

    ``s[n] = sum_m sum_l A[m, l] g[n - m*L] exp(2j*pi*l*n/L)`` over one period,
    with ``g`` indexed periodically.
    """
    A = np.asarray(A, dtype=complex)
    K, L = A.shape
    g = np.asarray(g, dtype=complex)
    if g.shape != (K * L,):
        raise DimensionError(f"pulse length {g.size} does not match period {K * L}")
    # per-symbol IDFT over subcarriers: b[m, n mod L] = sum_l A[m,l] e^{j2pi l n/L}
    b = np.fft.ifft(A, axis=1) * L
    n = np.arange(K * L)
    s = np.zeros(K * L, dtype=complex)
    for m in range(K):
        s += b[m, n % L] * np.roll(g, m * L)
    return s


def ofdm_demodulate(r, gamma, shape) -> np.ndarray:
    """Inner products ``A_hat[m, l] = <r, gamma_{m,l}>`` over one period.

    ``gamma_{m,l}[n] = gamma[n - m*L] exp(2j*pi*l*n/L)``; the conjugate falls on
    the pulse.
    """
    K, L = shape
    r = np.asarray(r, dtype=complex)
    gamma = np.asarray(gamma, dtype=complex)
    if r.shape != (K * L,) or gamma.shape != (K * L,):
        raise DimensionError(
            f"received signal and pulse must both have period {K * L}, got {r.size} and {gamma.size}"
        )
    A = np.empty((K, L), dtype=complex)
    for m in range(K):
        prod = r * np.conj(np.roll(gamma, m * L))
        # sum_n prod[n] e^{-j2pi l n/L}, folded to length L first
        A[m] = np.fft.fft(prod.reshape(K, L).sum(axis=0))
    return A


def biorthogonality_defect(g, gamma, shape) -> tuple[float, float]:
    """How far a pulse pair is from being biorthogonal.

    Returns
    -------
    (float, float)
        ``max |<g, gamma_{m,l}> - delta[m] delta[l]|`` over the frame, and the
        equivalent Zak-domain defect ``max |K*L*Zg*conj(Zgamma) - 1|``.
    """
    K, L = shape
    A = ofdm_demodulate(g, gamma, shape)
    A[0, 0] -= 1
    zak = K * L * dzt(g, shape) * np.conj(dzt(gamma, shape)) - 1
    return float(np.max(np.abs(A))), float(np.max(np.abs(zak)))


def dual_pulse(g, shape, floor: float = 1e-8) -> np.ndarray:
    """Biorthogonal dual of ``g`` built by Zak-domain inversion.

    ``Z_gamma = 1 / (K*L*conj(Z_g))``. Raises ``ValueError`` if ``|Z_g|``
    drops below ``floor`` anywhere, since the dual would blow up.
    """
    K, L = shape
    Zg = dzt(g, shape)
    if np.min(np.abs(Zg)) < floor:
        raise ValueError("pulse has (near) zeros in its Zak transform; no bounded dual exists")
    return idzt(1.0 / (K * L * np.conj(Zg)))


def overlay_roundtrip(Z, g, gamma) -> np.ndarray:
    """ISFFT, OFDM modulation, OFDM demodulation and SFFT in sequence, without a channel.

    Equals ``K*L * Z * Zg * conj(Zgamma)`` entrywise.
    """
    shape = grid_shape(Z)
    return sfft(ofdm_demodulate(ofdm_modulate(isfft(Z), g), gamma, shape))
