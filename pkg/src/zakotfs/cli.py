"""Command-line front end: ``zakotfs {transform,spread,simulate,overlay-check}``.

All outputs are CSV or JSON written under ``--out`` (default: ``$ZAKOTFS_OUT``,
else ``./zakotfs-out``). Exit codes: 0 success, 2 config or input error,
3 numerical-contract violation under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io as cio
from .channel import (
    ChannelSpec,
    CyclicPrefixError,
    FrameConfig,
    TdlParams,
    apply_channel_circular,
    apply_channel_linear,
    doppler_index,
    rng_stream,
    tdl_e_scenario,
)
from .modem import (
    centered_doppler_bins,
    dd_response,
    dd_spread_map,
    delay_interference_energy,
    doppler_kernel,
    receive,
    transmit,
)
from .overlay import biorthogonality_defect, dual_pulse, isfft, ofdm_modulate, overlay_roundtrip, sfft
from .pulses import PulseSpec, gaussian_window, rectangular_pulse
from .zak import DimensionError, GridShape, dzt, idzt

OUT_ENV = "ZAKOTFS_OUT"
EXIT_OK, EXIT_CONFIG, EXIT_CONTRACT = 0, 2, 3
ORACLE_TOL = 1e-10
LINEAR_TOL = 1e-6


class ConfigError(ValueError):
    pass


def _take(d: dict, allowed: set, where: str) -> dict:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")
    return d


def _num(d, key, where, kind=float, default=None):
    if key not in d:
        if default is None:
            raise ConfigError(f"{where}.{key} is required")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number")
    if kind is int and v != int(v):
        raise ConfigError(f"{where}.{key} must be an integer")
    return kind(v)


@dataclass(frozen=True)
class TdlConfig:
    fc_hz: float = 28e9
    vmax_mps: float = 150 / 3.6
    rms_delay_spread_s: float = 300e-9
    n0: float = 0.0


@dataclass(frozen=True)
class OverlayConfig:
    window: str = "rectangular"
    sigma: float = 0.25
    dual: str = "self"


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters mirrored from a JSON document."""

    frame: FrameConfig
    pulse: PulseSpec = field(default_factory=PulseSpec)
    channel: ChannelSpec | TdlConfig = field(default_factory=ChannelSpec)
    probe: tuple[int, int] = (0, 0)
    seed: int = 0
    mode: str = "circular"
    floor_db: float = -60.0
    overlay: OverlayConfig = field(default_factory=OverlayConfig)

    KEYS = {"frame", "pulse", "channel", "probe", "seed", "mode", "floor_db", "overlay"}

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        _take(d, cls.KEYS, "config")
        try:
            fr = _take(d.get("frame"), {"K", "L", "T_s", "Lcp"}, "frame")
            T = _num(fr, "T_s", "frame", default=1.0)
            frame = FrameConfig(_num(fr, "K", "frame", int), _num(fr, "L", "frame", int), T, _num(fr, "Lcp", "frame", int, 0))
            pu = _take(d.get("pulse", {}), {"family", "beta"}, "pulse")
            pulse = PulseSpec(pu.get("family", "raised-cosine"), _num(pu, "beta", "pulse", default=0.5), T)
            ch = d.get("channel", {"scatterers": [{"gain_re": 1.0, "delay_s": 0.0}]})
            if isinstance(ch, dict) and "model" in ch:
                _take(ch, {"model", "fc_hz", "vmax_mps", "rms_delay_spread_s", "n0"}, "channel")
                if ch["model"] != "tdl-e":
                    raise ConfigError(f"unknown channel model {ch['model']!r}")
                channel = TdlConfig(*(
                    _num(ch, k, "channel", default=getattr(TdlConfig, k))
                    for k in ("fc_hz", "vmax_mps", "rms_delay_spread_s", "n0")
                ))
            else:
                channel = ChannelSpec.from_dict(_take(ch, {"scatterers", "n0"}, "channel"))
            probe = d.get("probe", [0, 0])
            if not (isinstance(probe, list) and len(probe) == 2 and all(isinstance(p, int) for p in probe)):
                raise ConfigError("probe must be [n, k] integers")
            if not (0 <= probe[0] < frame.L and 0 <= probe[1] < frame.K):
                raise ConfigError(f"probe {probe} outside the fundamental rectangle")
            seed = _num(d, "seed", "config", int, 0)
            if seed < 0:
                raise ConfigError("seed must be nonnegative")
            mode = d.get("mode", "circular")
            if mode not in ("circular", "linear"):
                raise ConfigError("mode must be 'circular' or 'linear'")
            ov = _take(d.get("overlay", {}), {"window", "sigma", "dual"}, "overlay")
            overlay = OverlayConfig(ov.get("window", "rectangular"), _num(ov, "sigma", "overlay", default=0.25), ov.get("dual", "self"))
            if overlay.window not in ("rectangular", "gaussian") or overlay.dual not in ("self", "constructed"):
                raise ConfigError("overlay.window must be rectangular|gaussian and overlay.dual self|constructed")
            return cls(frame, pulse, channel, tuple(probe), seed, mode, _num(d, "floor_db", "config", default=-60.0), overlay)
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(str(exc)) from None

    def resolve_channel(self) -> tuple[ChannelSpec, float]:
        """Concrete scatterers and the maximum Doppler (Hz) they were drawn from."""
        if isinstance(self.channel, TdlConfig):
            params = TdlParams(self.channel.fc_hz, self.channel.vmax_mps, 1.0 / self.frame.T, self.channel.rms_delay_spread_s)
            spec = tdl_e_scenario(self.seed, params)
            return ChannelSpec(spec.scatterers, self.channel.n0), params.max_doppler
        return self.channel, max((abs(s.doppler) for s in self.channel.scatterers), default=0.0)


def load_config(path, seed_override=None) -> tuple[RunConfig, dict]:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    if seed_override is not None:
        raw = {**raw, "seed": seed_override}
    return RunConfig.from_dict(raw), raw


def _scatterer_rows(spec: ChannelSpec, cfg: FrameConfig):
    return [
        {
            "gain_re": float(np.real(s.gain)),
            "gain_im": float(np.imag(s.gain)),
            "delay_s": s.delay,
            "doppler_hz": s.doppler,
            "tau_over_T": s.delay / cfg.T,
            "k_p": doppler_index(s.doppler, cfg),
        }
        for s in spec.scatterers
    ]


def cmd_transform(args, out: Path) -> int:
    shape = GridShape(*args.shape)
    shape.validate()
    text = Path(args.input).read_text()
    ident = {"command": "transform", "direction": args.direction, "shape": list(shape), "input_sha256": cio.config_hash(text)}
    digest = cio.config_hash(ident)
    d = args.direction
    if d == "dzt":
        res = cio.grid_csv(dzt(cio.read_sequence(text), shape), digest)
    elif d == "idzt":
        Z = _shaped(cio.read_grid(text), (shape.L, shape.K))
        res = cio.sequence_csv(idzt(Z), digest)
    elif d == "isfft":
        Z = _shaped(cio.read_grid(text), (shape.L, shape.K))
        res = cio.grid_csv(isfft(Z), digest, header=("m", "l", "re", "im"))
    else:
        A = _shaped(cio.read_grid(text), (shape.K, shape.L))
        res = cio.grid_csv(sfft(A), digest)
    path = cio.write_text(out / f"{d}.csv", res)
    print(path)
    return EXIT_OK


def _shaped(Z, want):
    if Z.shape != want:
        raise DimensionError(f"input grid shape {Z.shape} does not match {want}")
    return Z


def cmd_spread(cfg: RunConfig, raw: dict, out: Path, strict: bool) -> int:
    digest = cio.config_hash({"command": "spread", **raw})
    frame = cfg.frame
    spec, nu_max = cfg.resolve_channel()
    spec = ChannelSpec(spec.scatterers, 0.0)
    m = dd_spread_map(spec, cfg.pulse, frame, cfg.probe, cfg.floor_db)
    bins = centered_doppler_bins(frame.K)
    cio.write_text(out / "spread_map.csv", cio.db_csv(m[:, bins % frame.K], digest, k_labels=bins))
    kernels = np.array([
        np.maximum(20 * np.log10(np.maximum(np.abs(doppler_kernel(doppler_index(s.doppler, frame), frame.K)), 1e-300)), cfg.floor_db)
        for s in spec.scatterers
    ]).reshape(len(spec.scatterers), frame.K)
    cio.write_text(out / "doppler_kernel.csv", cio.db_csv(kernels, digest, header=("p", "k", "db")))
    summary = {
        "config_sha256": digest,
        "delta_nu_hz": frame.doppler_resolution,
        "delta_tau_s": frame.delay_resolution,
        "nu_max_hz": nu_max,
        "nu_max_below_delta_nu": nu_max < frame.doppler_resolution,
        "probe": list(cfg.probe),
        "scatterers": _scatterer_rows(spec, frame),
        "delay_interference_energy": delay_interference_energy(spec, cfg.pulse, frame, cfg.probe),
        "nonzero_cells": int(np.count_nonzero(m > cfg.floor_db)),
    }
    print(cio.write_json(out / "spread_summary.json", summary))
    return EXIT_OK


def _qpsk(seed: int, shape) -> np.ndarray:
    bits = rng_stream(seed, "symbols").integers(0, 2, size=(2, *shape))
    return ((1 - 2 * bits[0]) + 1j * (1 - 2 * bits[1])) / math.sqrt(2)


def cmd_simulate(cfg: RunConfig, raw: dict, out: Path, strict: bool) -> int:
    digest = cio.config_hash({"command": "simulate", **raw})
    frame = cfg.frame
    spec, nu_max = cfg.resolve_channel()
    Z = _qpsk(cfg.seed, (frame.L, frame.K))
    x = idzt(Z)
    ref = dd_response(Z, spec, cfg.pulse, frame, seed=cfg.seed)
    Zc = receive(apply_channel_circular(x, spec, cfg.pulse, frame, seed=cfg.seed), frame)
    report = {
        "config_sha256": digest,
        "mode": cfg.mode,
        "delta_nu_hz": frame.doppler_resolution,
        "delta_tau_s": frame.delay_resolution,
        "nu_max_hz": nu_max,
        "scatterers": _scatterer_rows(spec, frame),
        "oracle_residual": float(np.max(np.abs(Zc - ref))),
    }
    violations = []
    if report["oracle_residual"] > ORACLE_TOL:
        violations.append("oracle_residual")
    if cfg.mode == "linear":
        try:
            y = apply_channel_linear(transmit(Z, frame), spec, cfg.pulse, frame, seed=cfg.seed)
        except CyclicPrefixError as exc:
            err = {"error": "cyclic_prefix_too_short", "required_samples": exc.required, "available_samples": exc.available}
            print(json.dumps(err), file=sys.stderr)
            return EXIT_CONFIG
        report["linear_circular_max_diff"] = float(np.max(np.abs(receive(y, frame) - Zc)))
        if report["linear_circular_max_diff"] > LINEAR_TOL:
            violations.append("linear_circular_max_diff")
    clean = dd_response(Z, ChannelSpec(spec.scatterers, 0.0), cfg.pulse, frame)
    if spec.n0 > 0:
        snr = 10 * np.log10(np.maximum(np.abs(clean) ** 2, 1e-300) / spec.n0)
        report["noise_variance_zak"] = float(np.mean(np.abs(ref - clean) ** 2))
        report["snr_db"] = {"mean": float(np.mean(snr)), "min": float(np.min(snr)), "max": float(np.max(snr))}
        cio.write_text(out / "snr.csv", cio.db_csv(snr, digest))
    else:
        report["noise_variance_zak"] = 0.0
        report["snr_db"] = None
    report["contract_violations"] = violations
    print(cio.write_json(out / "simulate_report.json", report))
    return EXIT_CONTRACT if strict and violations else EXIT_OK


def cmd_overlay_check(cfg: RunConfig, raw: dict, out: Path, strict: bool) -> int:
    digest = cio.config_hash({"command": "overlay-check", **raw})
    shape = cfg.frame.shape
    ov = cfg.overlay
    g = rectangular_pulse(shape) if ov.window == "rectangular" else gaussian_window(shape, ov.sigma)
    try:
        gamma = g if ov.dual == "self" else dual_pulse(g, shape)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    Z = _qpsk(cfg.seed, (shape.L, shape.K))
    rt = overlay_roundtrip(Z, g, gamma)
    Zg, Zgam = dzt(g, shape), dzt(gamma, shape)
    t_def, z_def = biorthogonality_defect(g, gamma, shape)
    s = ofdm_modulate(isfft(Z), g)
    report = {
        "config_sha256": digest,
        "window": ov.window,
        "dual": ov.dual,
        "defect_time": t_def,
        "defect_zak": z_def,
        "transmit_zak_residual": float(np.max(np.abs(dzt(s, shape) - math.sqrt(shape.N) * Z * Zg))),
        "chain_residual": float(np.max(np.abs(rt - shape.N * Z * Zg * np.conj(Zgam)))),
        "recovery_error": float(np.max(np.abs(rt - Z))),
    }
    if ov.window == "rectangular":
        report["rectangular_idzt_residual"] = float(np.max(np.abs(s - idzt(Z))))
    violations = [k for k in ("transmit_zak_residual", "chain_residual") if report[k] > ORACLE_TOL]
    if (ov.dual == "constructed" or ov.window == "rectangular") and report["recovery_error"] > ORACLE_TOL:
        violations.append("recovery_error")
    report["contract_violations"] = violations
    print(cio.write_json(out / "overlay_report.json", report))
    return EXIT_CONTRACT if strict and violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zakotfs", description="DZT-based OTFS toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="JSON run configuration")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./zakotfs-out)")
        sp.add_argument("--strict", action="store_true", help="exit 3 when a numerical contract is violated")

    t = sub.add_parser("transform", help="apply dzt, idzt, isfft or sfft to a CSV file")
    t.add_argument("input", help="CSV input (n,re,im sequence or i,j,re,im grid)")
    t.add_argument("--direction", required=True, choices=["dzt", "idzt", "isfft", "sfft"])
    t.add_argument("--shape", nargs=2, type=int, metavar=("K", "L"), required=True)
    t.add_argument("--out")
    for name, helptext in (
        ("spread", "delay-Doppler spread map of a single probe symbol"),
        ("simulate", "end-to-end frame through the channel, checked against the closed form"),
        ("overlay-check", "OFDM overlay biorthogonality and equivalence residuals"),
    ):
        common(sub.add_parser(name, help=helptext))
    return p


COMMANDS = {"spread": cmd_spread, "simulate": cmd_simulate, "overlay-check": cmd_overlay_check}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out or os.environ.get(OUT_ENV) or "zakotfs-out")
    try:
        if args.command == "transform":
            return cmd_transform(args, out)
        cfg, raw = load_config(args.config, args.seed)
        return COMMANDS[args.command](cfg, raw, out, args.strict)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
