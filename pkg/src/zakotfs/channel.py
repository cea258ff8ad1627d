"""Discrete time-frequency dispersive channel.

A channel is a finite set of scatterers, each with a complex gain, a delay in
seconds and a Doppler shift in Hz. The sampled matched-filter output is

    y[m] = sum_p c_p sum_n x[n] exp(2j*pi*k_p*n/(K*L)) h_p[m - n] + w[m]

with ``k_p = nu_p * K * L * T`` the Doppler shift in bins, ``h_p`` the sampled
delayed Nyquist pulse and ``c_p = alpha_p * exp(2j*pi*nu_p*tau_p)``. The phase
``exp(2j*pi*nu_p*tau_p)`` is kept separate from ``alpha_p`` on purpose.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .pulses import PulseSpec, sample_delayed_nyquist, truncated_delayed_nyquist
from .zak import DimensionError, GridShape

SPEED_OF_LIGHT = 299_792_458.0

# |value - round(value)| below this counts as an integer delay or Doppler bin
INTEGER_TOL = 1e-12

# independent random streams derived from one user seed
_STREAMS = {"noise": 0, "doppler": 1, "phase": 2, "symbols": 3}


class CyclicPrefixError(ValueError):
    """The cyclic prefix does not cover the channel's delay spread."""

    def __init__(self, required: float, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"cyclic prefix of {available} samples is shorter than the required "
            f"{required:.6g} samples"
        )


@dataclass(frozen=True)
class FrameConfig:
    """Frame geometry, modulation interval ``T`` (s) and CP length in samples."""

    K: int
    L: int
    T: float = 1.0
    Lcp: int = 0

    def __post_init__(self):
        GridShape(self.K, self.L).validate()
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0 <= self.Lcp < self.K * self.L:
            raise ValueError(f"Lcp must lie in [0, K*L), got {self.Lcp}")

    @property
    def shape(self) -> GridShape:
        return GridShape(self.K, self.L)

    @property
    def N(self) -> int:
        return self.K * self.L

    @property
    def doppler_resolution(self) -> float:
        """One Doppler bin in Hz, ``1 / (K*L*T)``."""
        return 1.0 / (self.K * self.L * self.T)

    @property
    def delay_resolution(self) -> float:
        """One delay bin in seconds, ``T``."""
        return self.T


@dataclass(frozen=True)
class Scatterer:
    gain: complex = 1.0
    delay: float = 0.0
    doppler: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delay) and math.isfinite(self.doppler)) or not np.isfinite(self.gain):
            raise ValueError("scatterer parameters must be finite")
        if self.delay < 0:
            raise ValueError(f"delay must be nonnegative, got {self.delay}")

    def combined_gain(self) -> complex:
        """``alpha * exp(2j*pi*nu*tau)``, the gain with the path phase folded in."""
        return complex(self.gain) * np.exp(2j * np.pi * self.doppler * self.delay)


@dataclass(frozen=True)
class ChannelSpec:
    scatterers: tuple[Scatterer, ...] = ()
    n0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scatterers", tuple(self.scatterers))
        if not (math.isfinite(self.n0) and self.n0 >= 0):
            raise ValueError(f"n0 must be finite and nonnegative, got {self.n0}")

    @property
    def max_delay(self) -> float:
        return max((s.delay for s in self.scatterers), default=0.0)

    def to_dict(self) -> dict:
        return {
            "scatterers": [
                {
                    "gain_re": float(np.real(s.gain)),
                    "gain_im": float(np.imag(s.gain)),
                    "delay_s": float(s.delay),
                    "doppler_hz": float(s.doppler),
                }
                for s in self.scatterers
            ],
            "n0": float(self.n0),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelSpec":
        unknown = set(d) - {"scatterers", "n0"}
        if unknown:
            raise ValueError(f"unknown channel keys: {sorted(unknown)}")
        scatterers = []
        for s in d.get("scatterers", []):
            extra = set(s) - {"gain_re", "gain_im", "delay_s", "doppler_hz"}
            if extra:
                raise ValueError(f"unknown scatterer keys: {sorted(extra)}")
            scatterers.append(
                Scatterer(
                    complex(s.get("gain_re", 0.0), s.get("gain_im", 0.0)),
                    float(s["delay_s"]),
                    float(s.get("doppler_hz", 0.0)),
                )
            )
        return cls(tuple(scatterers), float(d.get("n0", 0.0)))

    @classmethod
    def from_json(cls, text: str) -> "ChannelSpec":
        return cls.from_dict(json.loads(text))


def doppler_from_velocity(v: float, fc: float, c: float = SPEED_OF_LIGHT) -> float:
    """Doppler shift ``v * fc / c`` in Hz for relative velocity ``v`` (m/s)."""
    return v * fc / c


def doppler_index(nu: float, cfg: FrameConfig) -> float:
    """Doppler shift in units of the Doppler resolution, ``nu * K * L * T``."""
    return nu * cfg.K * cfg.L * cfg.T


def snap(value: float) -> float:
    """Round to the nearest integer if within :data:`INTEGER_TOL`."""
    r = round(value)
    return float(r) if abs(value - r) < INTEGER_TOL else float(value)


def check_pulse_interval(pulse: PulseSpec, cfg: FrameConfig):
    if not math.isclose(pulse.T, cfg.T, rel_tol=1e-12):
        raise ValueError(f"pulse interval {pulse.T} differs from frame interval {cfg.T}")


def path_parameters(scatterer: Scatterer, cfg: FrameConfig) -> tuple[complex, float]:
    """Per-path coefficient ``c_p`` and Doppler bin ``k_p``."""
    return scatterer.combined_gain(), snap(doppler_index(scatterer.doppler, cfg))


def doppler_ramp(k_p: float, N: int, n=None) -> np.ndarray:
    """``exp(2j*pi*k_p*n/N)`` at sample indices ``n`` (default ``0 .. N - 1``)."""
    n = np.arange(N) if n is None else np.asarray(n)
    if k_p == round(k_p):
        # exact periodic phases for integer bins
        return np.exp(2j * np.pi * ((int(k_p) * n) % N) / N)
    return np.exp(2j * np.pi * k_p * n / N)


def rng_stream(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(_STREAMS[name],)))


def add_awgn(y, n0: float, seed: int) -> np.ndarray:
    """Add circularly symmetric complex Gaussian noise of variance ``n0`` per sample."""
    y = np.asarray(y, dtype=complex)
    if n0 < 0:
        raise ValueError("n0 must be nonnegative")
    if n0 == 0:
        return y.copy()
    rng = rng_stream(seed, "noise")
    w = rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape)
    return y + math.sqrt(n0 / 2) * w


def apply_channel_circular(x, spec: ChannelSpec, pulse: PulseSpec, cfg: FrameConfig, seed: int | None = None) -> np.ndarray:
    """Circular-convolution channel on one period of ``x``.

    Noise is added only when ``spec.n0 > 0`` and a seed is given.
    """
    check_pulse_interval(pulse, cfg)
    x = np.asarray(x, dtype=complex)
    if x.shape != (cfg.N,):
        raise DimensionError(f"input length {x.size} does not match K*L = {cfg.N}")
    y = np.zeros(cfg.N, dtype=complex)
    for s in spec.scatterers:
        c, k_p = path_parameters(s, cfg)
        h = sample_delayed_nyquist(pulse, s.delay, cfg.shape)
        xu = x * doppler_ramp(k_p, cfg.N)
        y += c * np.fft.ifft(np.fft.fft(xu) * np.fft.fft(h))
    if spec.n0 > 0 and seed is not None:
        y = add_awgn(y, spec.n0, seed)
    return y


def required_cp(spec: ChannelSpec, cfg: FrameConfig) -> float:
    """CP length in samples: largest ``tau/T`` plus the half truncation window ``L/2``.

    Zero for a channel without scatterers.
    """
    if not spec.scatterers:
        return 0.0
    return spec.max_delay / cfg.T + cfg.L / 2


def apply_channel_linear(x_cp, spec: ChannelSpec, pulse: PulseSpec, cfg: FrameConfig, seed: int | None = None) -> np.ndarray:
    """Linear-convolution channel on a CP-prefixed block.

    ``x_cp`` holds ``x[-Lcp], ..., x[K*L - 1]``. The pulse is truncated but not
    periodized, and the Doppler phase keeps running through the prefix. The
    output is ``y[m]`` for ``m = 0 .. K*L - 1`` (receiver sampling offset
    ``Lcp*T``).

    Raises
    ------
    CyclicPrefixError
        If ``Lcp`` is below :func:`required_cp`.
    """
    check_pulse_interval(pulse, cfg)
    x_cp = np.asarray(x_cp, dtype=complex)
    N, Lcp = cfg.N, cfg.Lcp
    if x_cp.shape != (N + Lcp,):
        raise DimensionError(f"input length {x_cp.size} does not match K*L + Lcp = {N + Lcp}")
    need = required_cp(spec, cfg)
    if Lcp < need:
        raise CyclicPrefixError(need, Lcp)
    m = np.arange(N)
    y = np.zeros(N, dtype=complex)
    for s in spec.scatterers:
        c, k_p = path_parameters(s, cfg)
        xu = x_cp * doppler_ramp(k_p, N, np.arange(-Lcp, N))
        lags, taps = truncated_delayed_nyquist(pulse, s.delay, cfg.L)
        for lag, tap in zip(lags, taps):
            idx = m - lag + Lcp
            ok = (idx >= 0) & (idx < N + Lcp)
            y[ok] += c * tap * xu[idx[ok]]
    if spec.n0 > 0 and seed is not None:
        y = add_awgn(y, spec.n0, seed)
    return y


# ---------------------------------------------------------------------------
# TDL-E scenario

@dataclass(frozen=True)
class PowerDelayProfile:
    """Normalised tap delays and powers (dB) for the scattered taps, plus the LOS power."""

    delays: tuple[float, ...]
    powers_db: tuple[float, ...]
    los_power_db: float

    def __post_init__(self):
        if len(self.delays) != len(self.powers_db):
            raise ValueError("delays and powers must have equal length")


# 3GPP TR 38.901 Table 7.7.2-5 (TDL-E), scattered taps 2..14; the Rayleigh
# part of tap 1 is dropped, leaving LOS + 13 scatterers.
TDL_E_PROFILE = PowerDelayProfile(
    delays=(0.5133, 0.5440, 0.5630, 0.5440, 0.7112, 1.9092, 1.9293, 1.9589, 2.6426, 3.7136, 5.4524, 12.0034, 20.6519),
    powers_db=(-15.8, -18.1, -19.8, -22.9, -22.4, -18.6, -20.8, -22.6, -22.3, -25.6, -20.2, -29.8, -29.2),
    los_power_db=-0.03,
)


def rms_delay_spread(delays, powers) -> float:
    """Power-weighted RMS delay spread."""
    delays = np.asarray(delays, dtype=float)
    powers = np.asarray(powers, dtype=float)
    mean = np.sum(powers * delays) / np.sum(powers)
    return float(np.sqrt(np.sum(powers * (delays - mean) ** 2) / np.sum(powers)))


@dataclass(frozen=True)
class TdlParams:
    fc: float = 28e9
    vmax: float = 150 / 3.6
    sample_rate: float = 50e6
    rms_delay_spread: float = 300e-9
    profile: PowerDelayProfile = field(default=TDL_E_PROFILE)

    def __post_init__(self):
        for name in ("fc", "vmax", "sample_rate", "rms_delay_spread"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def max_doppler(self) -> float:
        return doppler_from_velocity(self.vmax, self.fc)


def tdl_e_scenario(seed: int, params: TdlParams = TdlParams()) -> ChannelSpec:
    """LOS tap at zero delay and Doppler plus the profile's scattered taps.

    Scattered delays are rescaled so that their power-weighted RMS spread
    equals ``params.rms_delay_spread``. Each tap gets one Doppler shift drawn
    uniformly from ``[-nu_max, nu_max]`` and a uniform random phase; tap
    magnitudes follow the profile exactly.
    """
    prof = params.profile
    norm = np.asarray(prof.delays, dtype=float)
    powers = 10.0 ** (np.asarray(prof.powers_db) / 10.0)
    delays = norm * (params.rms_delay_spread / rms_delay_spread(norm, powers))
    nu_max = params.max_doppler
    dopplers = rng_stream(seed, "doppler").uniform(-nu_max, nu_max, size=norm.size)
    phases = rng_stream(seed, "phase").uniform(0.0, 2 * np.pi, size=norm.size)
    taps = [Scatterer(complex(math.sqrt(10.0 ** (prof.los_power_db / 10.0))), 0.0, 0.0)]
    for d, p, nu, ph in zip(delays, powers, dopplers, phases):
        taps.append(Scatterer(complex(math.sqrt(p) * np.exp(1j * ph)), float(d), float(nu)))
    return ChannelSpec(tuple(taps), 0.0)
