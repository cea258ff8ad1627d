"""Nyquist pulses and their sampled, fractionally delayed versions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .zak import GridShape

FAMILIES = ("rectangular", "raised-cosine", "root-raised-cosine")

# integer-delay fast path threshold, in units of T
_INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class PulseSpec:
    """Pulse family, roll-off and modulation interval.

    ``family`` names the transmit/receive cascade. For ``raised-cosine`` and
    ``root-raised-cosine`` the Nyquist pulse seen after matched filtering is
    the raised cosine; for ``rectangular`` it is the unit triangle.
    """

    family: str = "raised-cosine"
    rolloff: float = 0.5
    T: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown pulse family {self.family!r}; expected one of {FAMILIES}")
        if not 0.0 <= self.rolloff <= 1.0:
            raise ValueError(f"rolloff must lie in [0, 1], got {self.rolloff}")
        if not self.T > 0:
            raise ValueError(f"modulation interval must be positive, got {self.T}")


def raised_cosine_value(u, beta: float):
    """Raised cosine pulse at normalised time ``u = t / T``.

    ``sinc(u) * cos(pi*beta*u) / (1 - (2*beta*u)**2)`` with the removable
    singularity at ``|2*beta*u| = 1`` replaced by its limit
    ``(pi/4) * sinc(1/(2*beta))``.
    """
    u = np.asarray(u, dtype=float)
    denom = 1.0 - (2.0 * beta * u) ** 2
    singular = np.abs(denom) < 1e-9
    safe = np.where(singular, 1.0, denom)
    val = np.sinc(u) * np.cos(np.pi * beta * u) / safe
    if beta > 0:
        val = np.where(singular, (np.pi / 4) * np.sinc(1.0 / (2.0 * beta)), val)
    # sinc is exact at zero but not at the integers; pin the Nyquist zeros
    is_int = (u == np.round(u)) & (u != 0)
    val = np.where(is_int, 0.0, val)
    return val[()] if val.ndim == 0 else val


def nyquist_value(spec: PulseSpec, u):
    """Nyquist pulse ``h(u*T)`` for the given pulse family."""
    if spec.family == "rectangular":
        u = np.asarray(u, dtype=float)
        val = np.clip(1.0 - np.abs(u), 0.0, None)
        return val[()] if val.ndim == 0 else val
    return raised_cosine_value(u, spec.rolloff)


def delay_window(tau_T: float, L: int) -> np.ndarray:
    """Sample indices ``n`` with ``-L/2 <= n - tau_T < L/2``."""
    lo = math.ceil(tau_T - L / 2)
    hi = math.ceil(tau_T + L / 2)
    return np.arange(lo, hi)


def sample_delayed_nyquist(spec: PulseSpec, tau: float, shape) -> np.ndarray:
    """Sampled, delayed and truncated Nyquist pulse, periodized to ``K*L``.

    ``h_p[n] = h(n*T - tau)`` for ``-L*T/2 <= n*T - tau < L*T/2`` and zero
    otherwise. At most ``L`` consecutive samples are nonzero, which keeps
    ``|dzt(h_p)|`` independent of ``k``. Delays on the sampling grid give an
    exact Kronecker delta.
    """
    shape = GridShape(*shape)
    tau_T = tau / spec.T
    if not math.isfinite(tau_T) or tau_T < 0 or tau_T >= shape.N:
        raise ValueError(
            f"delay {tau!r} s outside [0, K*L*T) = [0, {shape.N * spec.T!r}) s"
        )
    h = np.zeros(shape.N)
    n_int = round(tau_T)
    if abs(tau_T - n_int) < _INTEGER_TOL:
        h[n_int % shape.N] = 1.0
        return h
    n = delay_window(tau_T, shape.L)
    np.add.at(h, n % shape.N, nyquist_value(spec, n - tau_T))
    return h


def truncated_delayed_nyquist(spec: PulseSpec, tau: float, L: int):
    """Non-periodized samples of the truncated delayed pulse.

    Returns ``(n, values)`` with ``n`` the (possibly negative) sample indices
    of the truncation window, for linear convolution.
    """
    tau_T = tau / spec.T
    if not math.isfinite(tau_T) or tau_T < 0:
        raise ValueError(f"delay must be finite and nonnegative, got {tau!r}")
    n_int = round(tau_T)
    if abs(tau_T - n_int) < _INTEGER_TOL:
        return np.array([n_int]), np.array([1.0])
    n = delay_window(tau_T, L)
    return n, nyquist_value(spec, n - tau_T)


def rectangular_pulse(shape) -> np.ndarray:
    """``1/sqrt(L)`` on the first ``L`` samples of the period, zero elsewhere."""
    shape = GridShape(*shape)
    g = np.zeros(shape.N)
    g[: shape.L] = 1.0 / math.sqrt(shape.L)
    return g


def root_raised_cosine_sampled(spec: PulseSpec, shape, oversampling: int = 8) -> np.ndarray:
    """Unit-energy root-raised-cosine taps spanning ``L`` symbols.

    Sampled at ``T/oversampling``. The autocorrelation of the taps evaluated at
    multiples of ``oversampling`` approximates the raised cosine at integer
    ``u``; the residual error comes from truncating the span.
    """
    shape = GridShape(*shape)
    beta = spec.rolloff
    if not 0 < beta <= 1:
        raise ValueError("root-raised-cosine taps need rolloff in (0, 1]")
    if oversampling < 1:
        raise ValueError("oversampling must be >= 1")
    half = shape.L * oversampling // 2
    t = np.arange(-half, half + 1) / oversampling

    taps = np.empty_like(t)
    zero = t == 0
    edge = np.isclose(np.abs(4 * beta * t), 1.0, rtol=0, atol=1e-12)
    reg = ~(zero | edge)
    tr = t[reg]
    taps[reg] = (
        np.sin(np.pi * tr * (1 - beta)) + 4 * beta * tr * np.cos(np.pi * tr * (1 + beta))
    ) / (np.pi * tr * (1 - (4 * beta * tr) ** 2))
    taps[zero] = 1 - beta + 4 * beta / np.pi
    taps[edge] = (beta / np.sqrt(2)) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * beta)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * beta))
    )
    return taps / np.linalg.norm(taps)


def gaussian_window(shape, sigma: float = 0.25) -> np.ndarray:
    """Unit-energy Gaussian confined to the first ``L`` samples of the period.

    ``sigma`` is the standard deviation relative to ``L/2``.
    """
    shape = GridShape(*shape)
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    n = np.arange(shape.L)
    g = np.zeros(shape.N)
    g[: shape.L] = np.exp(-0.5 * ((n - shape.L / 2) / (sigma * shape.L / 2)) ** 2)
    return g / np.linalg.norm(g)
