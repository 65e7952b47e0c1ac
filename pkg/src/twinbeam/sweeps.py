"""
Parameter sweeps and their tabular output.

Sweep points are independent; with ``workers > 1`` they run on a thread
pool and rows are still emitted in input order. Output CSV files start
with ``# key: value`` provenance lines followed by a plain CSV table.
Floats are written with ``repr`` so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .config import RunConfig
from .entropy import report
from .errors import NumericalError, TwinBeamError
from .jsa import build_jsa, default_grid
from .photonstats import mean_photons
from .pump import PumpConfig, constant_energy_gain, stretched_duration
from .schmidt import decompose, high_gain_populations, k_high_gain, schmidt_number

GDD_COLUMNS = ("gdd", "tau_pump", "gain", "K_LG", "K_HG", "S_occ", "S_mod", "S_total", "error")
POWER_COLUMNS = ("N_P", "G", "N_S")


def point_seed(master_seed: int, index: int) -> int:
    """Deterministic per-point seed derived from (master seed, point index)."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, np.uint64)[0])


def _map(fn, items, workers):
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def gdd_point(config: RunConfig, gdd: float, grid=None) -> dict:
    """K and entropy columns for one GDD value."""
    pump = PumpConfig(config.pump.wavelength, config.pump.tau_fwhm, float(gdd), config.pump.pulse_energy)
    row = {"gdd": float(gdd), "tau_pump": float(stretched_duration(pump.tau_fwhm, gdd))}
    if config.gain.mode == "constant_energy":
        gain = float(constant_energy_gain(config.gain.G, pump.tau_fwhm, gdd))
    else:
        gain = float(config.gain.G)
    row["gain"] = gain
    try:
        if grid is None:
            grid = default_grid(config.crystal, pump, config.grid.n_points, config.grid.span_lobes)
        spectrum = decompose(build_jsa(config.crystal, pump, grid))
        pop = high_gain_populations(spectrum.eigenvalues, gain)
        ent = report(pop)
        row.update(
            K_LG=schmidt_number(spectrum.eigenvalues),
            K_HG=k_high_gain(pop),
            S_occ=ent.s_occ,
            S_mod=ent.s_mod,
            S_total=ent.s_total,
            error="",
        )
    except (TwinBeamError, np.linalg.LinAlgError) as exc:
        row.update({k: float("nan") for k in ("K_LG", "K_HG", "S_occ", "S_mod", "S_total")})
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_gdd_sweep(config: RunConfig, gdd_values=None) -> list[dict]:
    """Rebuild, decompose and repopulate the JSA at every GDD point.

    The grid is built once: GDD only adds a spectral phase, so the JSA
    support is the same at every point. Failures are recorded in the
    row's ``error`` column and the sweep continues.

    Note ``S_mod`` here is the exact hierarchical modal entropy; in the
    bright limit it approaches (K_HG − 1)/K_HG.
    """
    values = config.sweep.values() if gdd_values is None else np.asarray(gdd_values, dtype=float)
    grid = default_grid(config.crystal, config.pump, config.grid.n_points, config.grid.span_lobes)
    return _map(lambda g: gdd_point(config, g, grid), list(values), config.workers)


def run_power_sweep(config: RunConfig, pump_photons=None, a: float | None = None) -> list[dict]:
    """⟨N_S⟩ = sinh²(a√N_P) over the configured pump-photon range."""
    values = config.sweep.values() if pump_photons is None else np.asarray(pump_photons, dtype=float)
    a = config.gain.brightness_a if a is None else a
    if np.any(values < 0):
        raise NumericalError("pump photon numbers must be non-negative")
    rows = []
    for n_p in values:
        g = a * np.sqrt(n_p)
        rows.append({"N_P": float(n_p), "G": float(g), "N_S": float(mean_photons(g))})
    return rows


def fit_min_entropy_offset(model_gdd, model_smod, data_gdd, data_smod) -> float:
    """Least-squares constant added to a model S_mod(GDD) curve to match data.

    The model is interpolated at data points inside the overlapping GDD
    range. The offset is the exact minimizer of Σ(model + o − data)²,
    clamped so the shifted model stays inside [0, 1].
    """
    model_gdd = np.asarray(model_gdd, dtype=float)
    model_smod = np.asarray(model_smod, dtype=float)
    data_gdd = np.asarray(data_gdd, dtype=float)
    data_smod = np.asarray(data_smod, dtype=float)
    order = np.argsort(model_gdd)
    model_gdd, model_smod = model_gdd[order], model_smod[order]
    inside = (data_gdd >= model_gdd[0]) & (data_gdd <= model_gdd[-1])
    if not np.any(inside):
        raise NumericalError("model and data GDD ranges do not overlap")
    model_at_data = np.interp(data_gdd[inside], model_gdd, model_smod)
    offset = float(np.mean(data_smod[inside] - model_at_data))
    return float(np.clip(offset, -model_smod.min(), 1 - model_smod.max()))


def provenance(config: RunConfig, command: str) -> dict:
    return {
        "command": command,
        "artifact_version": __version__,
        "config_sha256": config.digest(),
        "seed": config.seed,
    }


def _format(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def format_table(rows, columns, header: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(row.get(c, "")) for c in columns])
    return buf.getvalue()


def write_table(path, rows, columns, header: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_table(rows, columns, header))


def read_table(path):
    """Inverse of :func:`write_table`: returns (header dict, list of row dicts)."""
    header, lines = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
            elif line.strip():
                lines.append(line)
    return header, list(csv.DictReader(lines))


def table_body(text: str) -> str:
    """CSV text with the provenance comment lines removed."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
