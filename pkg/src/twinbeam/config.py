"""
Run configuration: INI file with ``[crystal]``, ``[sellmeier]``,
``[pump]``, ``[grid]``, ``[gain]``, ``[sweep]`` and ``[run]`` sections.
Every key is optional; missing keys fall back to the dataclass defaults.

Example::

    [crystal]
    poling_period = 27.91
    length = 2.0
    temperature = 340.0

    [pump]
    tau_fwhm = 260
    gdd = 0

    [gain]
    G = 10
    mode = constant_energy

    [sweep]
    variable = gdd
    start = -60000
    stop = 60000
    points = 41
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .dispersion import CrystalConfig, SellmeierCoefficients
from .errors import ConfigError
from .pump import PumpConfig

GAIN_MODES = ("constant_energy", "constant_gain")
SWEEP_VARIABLES = ("gdd", "pump_power")


@dataclass(frozen=True)
class GridConfig:
    n_points: int = 512
    span_lobes: float = 6.0


@dataclass(frozen=True)
class GainConfig:
    """Transform-limited gain G and how it follows the pump through a GDD sweep.

    ``constant_energy`` keeps the pulse energy fixed, so G scales as
    √(τ0/τ); ``constant_gain`` holds G fixed at every GDD.
    ``brightness_a`` is the G = a√N_P slope used by power sweeps.
    """

    G: float = 10.0
    mode: str = "constant_energy"
    brightness_a: float = 3.8e-6

    def __post_init__(self):
        if self.mode not in GAIN_MODES:
            raise ConfigError(f"gain mode must be one of {GAIN_MODES}, got {self.mode!r}")
        if not self.G >= 0:
            raise ConfigError("G must be non-negative")


@dataclass(frozen=True)
class SweepSpec:
    variable: str = "gdd"
    start: float = -60000.0
    stop: float = 60000.0
    points: int = 41
    log: bool = False

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ConfigError("sweep range must be finite")
        if self.stop < self.start:
            raise ConfigError("sweep range must be ordered (start ≤ stop)")
        if self.points < 1:
            raise ConfigError("sweep needs at least one point")
        if self.log and self.start <= 0:
            raise ConfigError("log sweep needs a positive start")

    def values(self):
        if self.points == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunConfig:
    crystal: CrystalConfig = field(default_factory=CrystalConfig)
    pump: PumpConfig = field(default_factory=PumpConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    gain: GainConfig = field(default_factory=GainConfig)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    seed: int = 0
    workers: int = 1

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; worker count is excluded."""
        data = self.to_dict()
        data.pop("workers")
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


_SECTIONS = {
    "sellmeier": SellmeierCoefficients,
    "crystal": CrystalConfig,
    "pump": PumpConfig,
    "grid": GridConfig,
    "gain": GainConfig,
    "sweep": SweepSpec,
}


def _coerce(cls, key, raw):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    if key not in fields:
        raise ConfigError(f"unknown key {key!r} for {cls.__name__}")
    default = fields[key].default
    try:
        if isinstance(default, bool):
            return str(raw).strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float) or default is None:
            return float(raw)
        return str(raw).strip()
    except ValueError as exc:
        raise ConfigError(f"bad value for {cls.__name__}.{key}: {raw!r}") from exc


def _build(cls, values, base=None):
    try:
        if base is None:
            return cls(**values)
        return dataclasses.replace(base, **values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{cls.__name__}: {exc}") from exc


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Read an INI file (optional) and apply ``{"section.key": value}`` overrides.

    Overrides win over the file; the file wins over defaults.
    """
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if path is not None:
        if not parser.read(path):
            raise ConfigError(f"cannot read config file {path}")
    unknown = set(parser.sections()) - set(_SECTIONS) - {"run"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    values: dict[str, dict] = {name: {} for name in list(_SECTIONS) + ["run"]}
    for section in parser.sections():
        for key, raw in parser.items(section):
            values[section][key] = raw
    for dotted, raw in (overrides or {}).items():
        if raw is None:
            continue
        section, _, key = dotted.partition(".")
        if section not in values:
            raise ConfigError(f"unknown override section {section!r}")
        values[section][key] = raw

    typed = {}
    for name, cls in _SECTIONS.items():
        typed[name] = {k: _coerce(cls, k, v) for k, v in values[name].items()}
    sellmeier = _build(SellmeierCoefficients, typed["sellmeier"])
    crystal = _build(CrystalConfig, {**typed["crystal"], "sellmeier": sellmeier})
    run = values["run"]
    try:
        seed = int(run.get("seed", 0))
        workers = int(run.get("workers", 1))
    except ValueError as exc:
        raise ConfigError(f"bad [run] value: {exc}") from exc
    if seed < 0 or seed >= 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    if workers < 1:
        raise ConfigError("workers must be ≥ 1")
    return RunConfig(
        crystal=crystal,
        pump=_build(PumpConfig, typed["pump"]),
        grid=_build(GridConfig, typed["grid"]),
        gain=_build(GainConfig, typed["gain"]),
        sweep=_build(SweepSpec, typed["sweep"]),
        seed=seed,
        workers=workers,
    )
