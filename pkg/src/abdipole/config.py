"""Run configuration: flat TOML with dotted keys.

Example::

    solenoid.R = 0.01
    solenoid.n = 1.0e4
    solenoid.Z = 1.0e10
    solenoid.q_mag = 1.602176634e-19
    solenoid.v_q = 1.0e-3          # or solenoid.B_i = 2e-11 / "unit"
    beam.kinetic_energy = 30000.0  # eV; or beam.v_e in m/s
    beam.b = 0.02
    sweep.parameter = "b"
    sweep.start = 0.011
    sweep.stop = 1.0
    sweep.points = 50
    sweep.spacing = "log"
    output.format = "csv"
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .constants import CODATA2018, PhysConsts
from .interferometry import (
    EV,
    ElectronKinematics,
    kinematics_from_energy,
    kinematics_from_speed,
    unit_shift_field_closed_form,
)
from .model import BeamConfig, Side, SolenoidConfig, solenoid_for_field

__all__ = ["ConfigError", "SweepSpec", "RunConfig", "DEFAULTS", "load_config", "parse_config"]


class ConfigError(ValueError):
    """Malformed or incomplete configuration."""


_NUM = (int, float)

SCHEMA = {
    "solenoid.R": _NUM,
    "solenoid.n": _NUM,
    "solenoid.Z": _NUM,
    "solenoid.q_mag": _NUM,
    "solenoid.v_q": _NUM,
    "solenoid.B_i": _NUM + (str,),
    "beam.kinetic_energy": _NUM,
    "beam.v_e": _NUM,
    "beam.b": _NUM,
    "beam.side": (str,),
    "sweep.parameter": (str,),
    "sweep.start": _NUM,
    "sweep.stop": _NUM,
    "sweep.points": (int,),
    "sweep.spacing": (str,),
    "output.format": (str,),
    "output.path": (str,),
    "fringes.n_periods": (int,),
    "fringes.samples": (int,),
    "model.charges": (str,),
    "constants.c0": _NUM,
    "constants.mu0": _NUM,
    "constants.eps0": _NUM,
    "constants.h": _NUM,
    "constants.e_mag": _NUM,
    "constants.m_e": _NUM,
}

# used by `validate` when no config file is given
DEFAULTS = {
    "solenoid.R": 0.01,
    "solenoid.n": 1.0e4,
    "solenoid.Z": 1.0e10,
    "solenoid.q_mag": 1.602176634e-19,
    "solenoid.v_q": 1.0e-3,
    "beam.kinetic_energy": 30.0e3,
    "beam.b": 0.02,
}

SWEEP_PARAMETERS = ("b", "R", "v_q", "B_i")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"sweep.parameter must be one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"sweep.spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.points < 2:
            raise ConfigError(f"sweep.points must be at least 2, got {self.points!r}")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError("log spacing needs positive sweep.start and sweep.stop")

    def grid(self):
        import numpy as np

        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunConfig:
    solenoid: SolenoidConfig
    b: float
    drive_field: float | str | None = None
    kinetic_energy: float | None = None  # eV
    v_e: float | None = None
    side: Side = Side.PLUS_X
    sweep: SweepSpec | None = None
    output_format: str | None = None
    output_path: str | None = None
    n_periods: int = 3
    samples: int = 601
    charges: str = "approx"
    consts: PhysConsts = CODATA2018

    def kinematics(self) -> ElectronKinematics:
        if self.kinetic_energy is not None:
            return kinematics_from_energy(self.kinetic_energy * EV, self.consts)
        return kinematics_from_speed(self.v_e, self.consts)

    def beam(self) -> BeamConfig:
        return BeamConfig(v_e=self.kinematics().v_e, b=self.b, side=self.side)

    def coil(self) -> SolenoidConfig:
        """Solenoid with ``drive_field`` applied (it overrides ``v_q`` when set)."""
        if self.drive_field is None:
            return self.solenoid
        if self.drive_field == "unit":
            target = unit_shift_field_closed_form(self.solenoid, self.b, self.consts)
        else:
            target = float(self.drive_field)
        return solenoid_for_field(self.solenoid, target, self.consts)

    def with_value(self, parameter: str, value: float) -> "RunConfig":
        """Copy with one sweep parameter set."""
        if parameter == "b":
            return replace(self, b=value)
        if parameter == "R":
            return replace(self, solenoid=replace(self.solenoid, R=value))
        if parameter == "v_q":
            return replace(self, solenoid=replace(self.solenoid, v_q=value), drive_field=None)
        if parameter == "B_i":
            return replace(self, drive_field=value)
        raise ConfigError(f"unknown sweep parameter {parameter!r}")


def _flatten(table, prefix=""):
    out = {}
    for key, value in table.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        else:
            out[name] = value
    return out


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def parse_overrides(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        out[key.strip()] = _parse_value(value.strip())
    return out


def parse_config(flat: dict, strict_constants: bool = True) -> RunConfig:
    """Build a :class:`RunConfig` from a flat ``{dotted.key: value}`` mapping."""
    for key, value in flat.items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown configuration key {key!r}")
        types = SCHEMA[key]
        if isinstance(value, bool) or not isinstance(value, types):
            raise ConfigError(f"{key} has the wrong type: {value!r}")
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError(f"{key} must be finite, got {value!r}")

    def need(key):
        if key not in flat:
            raise ConfigError(f"missing required key {key!r}")
        return flat[key]

    consts_kw = {k.split(".", 1)[1]: float(v) for k, v in flat.items() if k.startswith("constants.")}
    consts = CODATA2018.replace(strict=strict_constants, **consts_kw)

    if "solenoid.v_q" in flat and "solenoid.B_i" in flat:
        raise ConfigError("give at most one of solenoid.v_q and solenoid.B_i")
    field_value = flat.get("solenoid.B_i")
    if isinstance(field_value, str) and field_value != "unit":
        raise ConfigError(f"solenoid.B_i must be a number or \"unit\", got {field_value!r}")
    solenoid = SolenoidConfig(
        R=float(need("solenoid.R")),
        n=float(need("solenoid.n")),
        Z=float(need("solenoid.Z")),
        q_mag=float(flat.get("solenoid.q_mag", consts.e_mag)),
        v_q=float(flat.get("solenoid.v_q", 0.0)),
    )

    has_energy = "beam.kinetic_energy" in flat
    has_speed = "beam.v_e" in flat
    if has_energy == has_speed:
        raise ConfigError("give exactly one of beam.kinetic_energy [eV] and beam.v_e [m/s]")

    sweep = None
    sweep_keys = {k: v for k, v in flat.items() if k.startswith("sweep.")}
    if sweep_keys:
        sweep = SweepSpec(
            parameter=need("sweep.parameter"),
            start=float(need("sweep.start")),
            stop=float(need("sweep.stop")),
            points=need("sweep.points"),
            spacing=flat.get("sweep.spacing", "linear"),
        )

    fmt = flat.get("output.format")
    if fmt is not None and fmt not in ("csv", "json"):
        raise ConfigError(f"output.format must be 'csv' or 'json', got {fmt!r}")
    charges = flat.get("model.charges", "approx")
    if charges not in ("approx", "exact"):
        raise ConfigError(f"model.charges must be 'approx' or 'exact', got {charges!r}")
    side = flat.get("beam.side", "plus_x")
    if side not in ("plus_x", "minus_x"):
        raise ConfigError(f"beam.side must be 'plus_x' or 'minus_x', got {side!r}")

    return RunConfig(
        solenoid=solenoid,
        b=float(need("beam.b")),
        drive_field=field_value if isinstance(field_value, str) or field_value is None else float(field_value),
        kinetic_energy=float(flat["beam.kinetic_energy"]) if has_energy else None,
        v_e=float(flat["beam.v_e"]) if has_speed else None,
        side=Side(side),
        sweep=sweep,
        output_format=fmt,
        output_path=flat.get("output.path"),
        n_periods=flat.get("fringes.n_periods", 3),
        samples=flat.get("fringes.samples", 601),
        charges=charges,
        consts=consts,
    )


def load_config(path=None, overrides=None, strict_constants: bool = True,
                defaults: dict | None = None) -> RunConfig:
    """Read ``path`` (or start from ``defaults``), apply ``key=value`` overrides, validate."""
    flat = dict(defaults or {})
    if path is not None:
        with open(path, "rb") as fh:
            try:
                flat.update(_flatten(tomllib.load(fh)))
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
    overrides = parse_overrides(overrides)
    # an override of one speed/drive key replaces its alternative
    for a, b in (("beam.kinetic_energy", "beam.v_e"), ("solenoid.v_q", "solenoid.B_i")):
        if a in overrides and b not in overrides:
            flat.pop(b, None)
        if b in overrides and a not in overrides:
            flat.pop(a, None)
    flat.update(overrides)
    return parse_config(flat, strict_constants=strict_constants)
