"""Command-line entry point: ``twinbeam <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 resource refusal.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import __version__
from .analysis import (
    bootstrap_k,
    g1_from_covariance,
    read_spectra_csv,
    simulate_from_spectrum,
)
from .config import RunConfig, SweepSpec, load_config
from .dispersion import group_velocity_mismatch, solve_qpm, temperature_for_signal
from .errors import ConfigError, TwinBeamError
from .gaussian import TmssState, condition_idler
from .jsa import build_jsa, default_grid, fedorov_ratio, write_jsa_csv
from .photonstats import fit_brightness_curve, g2_theory, sample_shots
from .schmidt import decompose, gain_for_k, high_gain_populations, k_high_gain
from .sweeps import (
    GDD_COLUMNS,
    POWER_COLUMNS,
    fit_min_entropy_offset,
    format_table,
    provenance,
    read_table,
    run_gdd_sweep,
    run_power_sweep,
)

DEFAULT_POWER_SWEEP = SweepSpec("pump_power", 1e10, 1.4e13, 41, log=True)

# flag name -> "section.key" in the run configuration
OVERRIDES = {
    "poling_period": "crystal.poling_period",
    "length": "crystal.length",
    "temperature": "crystal.temperature",
    "pump_wavelength": "pump.wavelength",
    "tau_fwhm": "pump.tau_fwhm",
    "gdd": "pump.gdd",
    "pulse_energy": "pump.pulse_energy",
    "gain": "gain.G",
    "gain_mode": "gain.mode",
    "brightness_a": "gain.brightness_a",
    "n_points": "grid.n_points",
    "span_lobes": "grid.span_lobes",
    "sweep_start": "sweep.start",
    "sweep_stop": "sweep.stop",
    "sweep_points": "sweep.points",
    "sweep_log": "sweep.log",
    "seed": "run.seed",
    "workers": "run.workers",
}


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run options")
    g.add_argument("--config", metavar="PATH", help="INI configuration file")
    g.add_argument("--seed", type=int, metavar="U64", help="master random seed")
    g.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    g.add_argument("--workers", type=int, metavar="N", help="worker threads")
    o = p.add_argument_group("configuration overrides (flag wins over file)")
    o.add_argument("--poling-period", type=float, metavar="UM")
    o.add_argument("--length", type=float, metavar="MM", help="crystal length")
    o.add_argument("--temperature", type=float, metavar="K")
    o.add_argument("--pump-wavelength", type=float, metavar="UM")
    o.add_argument("--tau-fwhm", type=float, metavar="FS", help="transform-limited pump FWHM")
    o.add_argument("--gdd", type=float, metavar="FS2", help="pump group-delay dispersion")
    o.add_argument("--pulse-energy", type=float, metavar="J")
    o.add_argument("--gain", type=float, metavar="G", help="transform-limited parametric gain")
    o.add_argument("--gain-mode", choices=["constant_energy", "constant_gain"])
    o.add_argument("--brightness-a", type=float, metavar="A", help="G = a·sqrt(N_P) slope")
    o.add_argument("--n-points", type=int, metavar="N", help="JSA grid points per axis")
    o.add_argument("--span-lobes", type=float, metavar="X")
    o.add_argument("--sweep-start", type=float)
    o.add_argument("--sweep-stop", type=float)
    o.add_argument("--sweep-points", type=int)
    o.add_argument("--sweep-log", action="store_const", const="true", default=None)
    return p


def _config(args) -> RunConfig:
    overrides = {key: getattr(args, name) for name, key in OVERRIDES.items()}
    return load_config(args.config, overrides)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _floats(text: str, name: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"--{name}: expected comma-separated numbers") from exc


def _spectrum(cfg: RunConfig, n_points: int | None = None):
    n = cfg.grid.n_points if n_points is None else n_points
    grid = default_grid(cfg.crystal, cfg.pump, n, cfg.grid.span_lobes)
    jsa = build_jsa(cfg.crystal, cfg.pump, grid)
    return jsa, decompose(jsa)


def cmd_qpm_solve(args, cfg: RunConfig):
    crystal = cfg.crystal
    if args.signal is not None:
        t = temperature_for_signal(args.signal, cfg.pump.wavelength, crystal)
        crystal = type(crystal)(crystal.poling_period, crystal.length, t, crystal.sellmeier)
    sol = solve_qpm(cfg.pump.wavelength, crystal)
    out = {
        "pump": cfg.pump.wavelength,
        "temperature": crystal.temperature,
        "signal": sol.signal,
        "idler": sol.idler,
        "gvm_pump_signal_fs_per_mm": float(group_velocity_mismatch(cfg.pump.wavelength, sol.signal, crystal)),
        "gvm_pump_idler_fs_per_mm": float(group_velocity_mismatch(cfg.pump.wavelength, sol.idler, crystal)),
    }
    _emit(_json(out), args.out)


def cmd_jsa(args, cfg: RunConfig):
    jsa, spec = _spectrum(cfg)
    if args.out is not None:
        write_jsa_csv(args.out, jsa)
    summary = {
        "shape": list(jsa.values.shape),
        "K_LG": spec.K,
        "fedorov_ratio": fedorov_ratio(jsa),
        "written": args.out,
    }
    print(_json(summary))


def cmd_schmidt(args, cfg: RunConfig):
    jsa, spec = _spectrum(cfg)
    pop = high_gain_populations(spec.eigenvalues, cfg.gain.G)
    n = min(args.modes, pop.weights.size)
    lines = [
        f"# K_LG: {spec.K!r}",
        f"# K_HG: {k_high_gain(pop)!r}",
        f"# G: {cfg.gain.G!r}",
        "n,lambda,pi_HG,N",
    ]
    for j in range(n):
        vals = (spec.eigenvalues[j], pop.weights[j], pop.photons[j])
        lines.append(f"{j + 1}," + ",".join(repr(float(v)) for v in vals))
    print("\n".join(lines))
    if args.out is not None:
        axis = jsa.axis("signal")
        cols = [axis] + [np.abs(spec.signal_modes[:, j]) ** 2 for j in range(n)]
        header = "omega_s," + ",".join(f"mode_{j + 1}" for j in range(n))
        rows = [",".join(repr(float(v)) for v in row) for row in np.column_stack(cols)]
        _emit("\n".join([header] + rows), args.out)


def cmd_gdd_sweep(args, cfg: RunConfig):
    if cfg.sweep.variable != "gdd":
        raise ConfigError(f"gdd-sweep needs sweep.variable = gdd, got {cfg.sweep.variable!r}")
    rows = run_gdd_sweep(cfg)
    header = provenance(cfg, "gdd-sweep")
    header["gain_mode"] = cfg.gain.mode
    _emit(format_table(rows, GDD_COLUMNS, header), args.out)
    failed = sum(1 for r in rows if r["error"])
    if failed:
        print(f"warning: {failed} of {len(rows)} points failed", file=sys.stderr)


def cmd_power_sweep(args, cfg: RunConfig):
    if cfg.sweep.variable != "pump_power":
        # the config's sweep block describes GDD; keep only explicit range flags
        flags = {"start": args.sweep_start, "stop": args.sweep_stop, "points": args.sweep_points}
        spec = dataclasses.replace(DEFAULT_POWER_SWEEP, **{k: v for k, v in flags.items() if v is not None})
        cfg = cfg.replace(sweep=spec)
    header = provenance(cfg, "power-sweep")
    a = cfg.gain.brightness_a
    if args.data is not None:
        _, data = read_table(args.data)
        points = _columns(data, ("N_P", "N_S"), args.data)
        a = fit_brightness_curve(np.column_stack(points))
        header["fitted_a"] = repr(a)
    header["a"] = repr(a)
    _emit(format_table(run_power_sweep(cfg, a=a), POWER_COLUMNS, header), args.out)


def _columns(rows, names, path):
    try:
        return [np.array([float(r[n]) for r in rows]) for n in names]
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{path}: need numeric columns {names}") from exc


def cmd_g2_sim(args, cfg: RunConfig):
    if args.weights is not None:
        weights = np.array(_floats(args.weights, "weights"))
        weights = weights / weights.sum()
    elif args.from_jsa:
        _, spec = _spectrum(cfg)
        weights = high_gain_populations(spec.eigenvalues, cfg.gain.G).weights
    else:
        weights = np.full(args.modes, 1.0 / args.modes)
    ens = sample_shots(weights, args.n_total, args.shots, cfg.seed, args.discrete, cfg.workers)
    summary = ens.summary()
    summary["g2_theory"] = g2_theory(weights)
    summary["n_modes"] = int(weights.size)
    if args.hist is not None:
        edges, counts = ens.histogram(bins=args.bins, density=False)
        lines = ["left_edge,right_edge,count"]
        lines += [f"{lo!r},{hi!r},{int(c)}" for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
        _emit("\n".join(lines), args.hist)
    _emit(_json(summary), args.out)


def cmd_condition(args, cfg: RunConfig):
    if args.mu is not None:
        try:
            mu = [complex(x.replace(" ", "")) for x in args.mu.split(",")]
        except ValueError as exc:
            raise ConfigError("--mu: expected comma-separated complex numbers like 0.3+0.1j") from exc
        state = TmssState.from_mu(mu)
    elif args.r is not None:
        r = _floats(args.r, "r")
        phi = _floats(args.phi, "phi") if args.phi is not None else [0.0] * len(r)
        if len(phi) != len(r):
            raise ConfigError("--r and --phi need the same length")
        state = TmssState(r, phi)
    else:
        raise ConfigError("condition needs --mu or --r")
    result = condition_idler(state, args.n)
    out = result.as_dict()
    out["n_photons"] = args.n
    _emit(_json(out), args.out)


def cmd_analyze(args, cfg: RunConfig):
    out = {}
    if args.spectra is not None:
        ensemble = read_spectra_csv(args.spectra)
    else:
        _, spec = _spectrum(cfg, args.bins)
        gain = cfg.gain.G if args.target_k is None else gain_for_k(spec.eigenvalues, args.target_k)
        ensemble, k_true = simulate_from_spectrum(
            spec, gain, args.shots, cfg.seed, noise=args.noise, workers=cfg.workers
        )
        out.update(gain=gain, K_true=k_true)
    est = g1_from_covariance(ensemble, warn=False)
    boot = bootstrap_k(ensemble, args.subsets)
    out.update(
        K=est.K,
        bootstrap_mean=boot.mean,
        bootstrap_std=boot.std,
        n_shots=ensemble.n_shots,
        n_bins=ensemble.n_bins,
        eigenvalues=est.eigenvalues[:10].tolist(),
        raw_eigenvalues=est.raw_eigenvalues[:10].tolist(),
        warnings=list(est.warnings),
    )
    for note in est.warnings:
        print(f"warning: {note}", file=sys.stderr)
    _emit(_json(out), args.out)


def cmd_fit(args, cfg: RunConfig):
    if args.brightness is not None:
        _, rows = read_table(args.brightness)
        n_p, n_s = _columns(rows, ("N_P", "N_S"), args.brightness)
        out = {"a": fit_brightness_curve(np.column_stack([n_p, n_s]))}
    elif args.model is not None and args.data is not None:
        _, model = read_table(args.model)
        _, data = read_table(args.data)
        mx, my = _columns([r for r in model if not r.get("error")], ("gdd", "S_mod"), args.model)
        dx, dy = _columns(data, ("gdd", "S_mod"), args.data)
        out = {"offset": fit_min_entropy_offset(mx, my, dx, dy)}
    else:
        raise ConfigError("fit needs --brightness, or both --model and --data")
    _emit(_json(out), args.out)


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="twinbeam", description="High-gain twin-beam PDC modeling toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    p = add("qpm-solve", cmd_qpm_solve, "phase-matched signal/idler wavelengths")
    p.add_argument("--signal", type=float, metavar="UM", help="tune temperature to this signal wavelength")
    add("jsa", cmd_jsa, "build the joint spectral amplitude (CSV via --out)")
    p = add("schmidt", cmd_schmidt, "Schmidt spectrum table; mode profiles via --out")
    p.add_argument("--modes", type=int, default=10)
    add("gdd-sweep", cmd_gdd_sweep, "K and entropies versus pump GDD")
    p = add("power-sweep", cmd_power_sweep, "signal photons versus pump photons")
    p.add_argument("--data", metavar="CSV", help="measured N_P,N_S points to fit a")
    p = add("g2-sim", cmd_g2_sim, "Monte Carlo photon-number statistics")
    p.add_argument("--modes", type=int, default=1, help="number of equal-weight modes")
    p.add_argument("--weights", help="comma-separated mode weights")
    p.add_argument("--from-jsa", action="store_true", help="use high-gain weights of the configured JSA")
    p.add_argument("--n-total", type=float, default=1.296e8)
    p.add_argument("--shots", type=int, default=1_000_000)
    p.add_argument("--discrete", action="store_true", help="Bose-Einstein sampling for dim sources")
    p.add_argument("--hist", metavar="CSV", help="write a photon-number histogram")
    p.add_argument("--bins", type=int, default=100)
    p = add("condition", cmd_condition, "idler state conditioned on N signal photons")
    p.add_argument("--mu", help="comma-separated complex μ_n")
    p.add_argument("--r", help="comma-separated squeezing parameters")
    p.add_argument("--phi", help="comma-separated squeezing phases")
    p.add_argument("--n", type=int, required=True, help="detected signal photons")
    p = add("analyze", cmd_analyze, "Schmidt number from shot-to-shot spectra")
    p.add_argument("--spectra", metavar="CSV", help="measured spectra (one shot per row)")
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--bins", type=int, default=128)
    p.add_argument("--target-k", type=float, help="choose G so the simulated K_HG equals this")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--subsets", type=int, default=60)
    p = add("fit", cmd_fit, "fit brightness slope or minimum-entropy offset")
    p.add_argument("--brightness", metavar="CSV", help="N_P,N_S points")
    p.add_argument("--model", metavar="CSV", help="gdd-sweep output")
    p.add_argument("--data", metavar="CSV", help="measured gdd,S_mod points")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, _config(args))
    except TwinBeamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
