"""OTFS transmit/receive chain and the delay-Doppler input-output relation.

The received grid is a sum over paths of a Doppler-domain convolution with the
DZT of the Doppler ramp followed by a delay-domain convolution with the DZT of
the sampled pulse; :func:`dd_response` evaluates exactly that, entirely in the
Zak domain.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import (
    INTEGER_TOL,
    ChannelSpec,
    FrameConfig,
    check_pulse_interval,
    add_awgn,
    path_parameters,
    snap,
)
from .pulses import PulseSpec, sample_delayed_nyquist
from .zak import DimensionError, GridShape, dzt, idzt, zak_convolve, zak_modulate

__all__ = [
    "FrameConfig",
    "transmit",
    "receive",
    "doppler_kernel",
    "doppler_spread_dzt",
    "delay_spread_dzt",
    "centered_doppler_bins",
    "dd_response",
    "dd_spread_map",
    "delay_profile",
    "doppler_profile",
    "delay_interference_energy",
]


def transmit(Z, cfg: FrameConfig) -> np.ndarray:
    """IDZT of the frame with the last ``Lcp`` samples copied in front."""
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (cfg.L, cfg.K):
        raise DimensionError(f"grid shape {Z.shape} does not match (L, K) = {(cfg.L, cfg.K)}")
    x = idzt(Z)
    return np.concatenate([x[cfg.N - cfg.Lcp:], x])


def receive(y, cfg: FrameConfig) -> np.ndarray:
    """DZT of the CP-free received samples."""
    return dzt(y, cfg.shape)


def doppler_kernel(k_p: float, K: int, centered: bool = False) -> np.ndarray:
    """Dirichlet kernel ``V[k - k_p]`` for the ``K`` Doppler bins.

    ``V[d] = K**-0.5 * exp(-1j*pi*(K-1)*d/K) * sin(pi*d) / sin(pi*d/K)``,
    with the removable singularities at integer ``d`` filled in exactly:
    ``sqrt(K)`` where ``d`` is a multiple of ``K`` and zero at other integers.
    Bins are ``0..K-1`` by default, or :func:`centered_doppler_bins` order.
    """
    k = centered_doppler_bins(K) if centered else np.arange(K)
    d = k - snap(k_p)
    d_int = np.round(d)
    on_grid = np.abs(d - d_int) < INTEGER_TOL
    safe = np.where(on_grid, 0.5, d)
    V = (
        np.exp(-1j * np.pi * (K - 1) * safe / K)
        * np.sin(np.pi * safe)
        / np.sin(np.pi * safe / K)
        / math.sqrt(K)
    )
    exact = np.where(np.mod(d_int, K) == 0, math.sqrt(K), 0.0)
    return np.where(on_grid, exact, V)


def centered_doppler_bins(K: int) -> np.ndarray:
    """Doppler bins re-centred to ``[-ceil(K/2) + 1, floor(K/2)]``."""
    return np.arange(-math.ceil(K / 2) + 1, K // 2 + 1)


def doppler_spread_dzt(k_p: float, shape) -> np.ndarray:
    """DZT of the Doppler ramp ``exp(2j*pi*k_p*n/(K*L))`` in closed form."""
    shape = GridShape(*shape)
    k_p = snap(k_p)
    n = np.arange(shape.L)[:, None]
    return np.exp(2j * np.pi * k_p * n / shape.N) * doppler_kernel(k_p, shape.K)[None, :]


def delay_spread_dzt(pulse: PulseSpec, tau: float, shape) -> np.ndarray:
    """DZT of the sampled delayed pulse; its magnitude does not depend on ``k``."""
    return dzt(sample_delayed_nyquist(pulse, tau, shape), shape)


def _path_kernels(spec: ChannelSpec, pulse: PulseSpec, cfg: FrameConfig):
    for s in spec.scatterers:
        c, k_p = path_parameters(s, cfg)
        yield c, doppler_spread_dzt(k_p, cfg.shape), delay_spread_dzt(pulse, s.delay, cfg.shape)


def dd_response(
    Z,
    spec: ChannelSpec,
    pulse: PulseSpec,
    cfg: FrameConfig,
    seed: int | None = None,
    kernels=None,
) -> np.ndarray:
    """Received delay-Doppler grid computed in the Zak domain.

    Per path: modulate ``Z`` with the Doppler-ramp DZT (convolution along
    ``k``), convolve the result with the pulse DZT (quasi-periodic
    convolution along ``n``), scale by ``alpha * exp(2j*pi*nu*tau)``.

    If ``spec.n0 > 0`` and a seed is given, noise is drawn in the time domain
    and transformed, the same way :func:`~zakotfs.channel.apply_channel_circular`
    draws it. ``kernels`` may carry precomputed per-path kernels from
    :func:`path_kernels` to reuse across probes.
    """
    check_pulse_interval(pulse, cfg)
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (cfg.L, cfg.K):
        raise DimensionError(f"grid shape {Z.shape} does not match (L, K) = {(cfg.L, cfg.K)}")
    if kernels is None:
        kernels = path_kernels(spec, pulse, cfg)
    out = np.zeros_like(Z)
    for c, Zu, Zh in kernels:
        out += c * zak_convolve(zak_modulate(Z, Zu), Zh)
    if spec.n0 > 0 and seed is not None:
        out += dzt(add_awgn(np.zeros(cfg.N), spec.n0, seed), cfg.shape)
    return out


def path_kernels(spec: ChannelSpec, pulse: PulseSpec, cfg: FrameConfig) -> list:
    """Per-path ``(coefficient, Doppler-ramp DZT, pulse DZT)`` triples."""
    check_pulse_interval(pulse, cfg)
    return list(_path_kernels(spec, pulse, cfg))


def _probe_grid(cfg: FrameConfig, probe) -> np.ndarray:
    n0, k0 = probe
    if not (0 <= n0 < cfg.L and 0 <= k0 < cfg.K):
        raise DimensionError(f"probe {probe} outside the fundamental rectangle")
    Z = np.zeros((cfg.L, cfg.K), dtype=complex)
    Z[n0, k0] = 1.0
    return Z


def dd_spread_map(
    spec: ChannelSpec,
    pulse: PulseSpec,
    cfg: FrameConfig,
    probe=(0, 0),
    floor_db: float = -60.0,
) -> np.ndarray:
    """Response magnitude in dB to a single unit symbol at ``probe``.

    ``20*log10|dd_response|``, clipped below at ``floor_db``. Shape ``(L, K)``.
    """
    Zy = dd_response(_probe_grid(cfg, probe), spec, pulse, cfg)
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(np.abs(Zy))
    return np.maximum(db, floor_db)


def delay_profile(Zy) -> np.ndarray:
    """Energy per delay bin (summed over Doppler)."""
    return np.sum(np.abs(Zy) ** 2, axis=1)


def doppler_profile(Zy) -> np.ndarray:
    """Energy per Doppler bin (summed over delay)."""
    return np.sum(np.abs(Zy) ** 2, axis=0)


def delay_interference_energy(
    spec: ChannelSpec, pulse: PulseSpec, cfg: FrameConfig, probe=(0, 0), guard: int = 1
) -> float:
    """Delay-domain leakage of a single probe symbol, summed over paths.

    For each path the probe response is computed on its own; energy in delay
    bins more than ``guard`` bins (circularly) from the path's nominal bin
    ``probe_n + round(tau/T)`` counts as interference.
    """
    Z = _probe_grid(cfg, probe)
    total = 0.0
    for s in spec.scatterers:
        Zy = dd_response(Z, ChannelSpec((s,)), pulse, cfg)
        centre = (probe[0] + round(s.delay / cfg.T)) % cfg.L
        dist = np.abs((np.arange(cfg.L) - centre + cfg.L // 2) % cfg.L - cfg.L // 2)
        total += float(np.sum(delay_profile(Zy)[dist > guard]))
    return total
