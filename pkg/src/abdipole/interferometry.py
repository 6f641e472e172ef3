"""From transverse momentum to observable fringe shifts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .constants import CODATA2018, PhysConsts
from .errors import ConsistencyError, DomainError, SamplingError
from .model import (
    BeamConfig,
    MomentumBreakdown,
    SolenoidConfig,
    check_geometry,
    pole_proximity,
    solenoid_for_field,
    total_transverse_momentum,
)

__all__ = [
    "ElectronKinematics",
    "FringePrediction",
    "FringeProfile",
    "kinematics_from_energy",
    "kinematics_from_speed",
    "deflection_angle",
    "fringe_order_shift",
    "unit_shift_field_closed_form",
    "unit_shift_field",
    "canonical_unit_field",
    "model_to_canonical_ratio",
    "predict",
    "fringe_profile",
]

INVERSION_RTOL = 1e-9
EV = 1.602176634e-19


@dataclass(frozen=True)
class ElectronKinematics:
    kinetic_energy: float
    v_e: float
    gamma: float
    p_e: float
    lambda_e: float


@dataclass(frozen=True)
class FringePrediction:
    delta: float
    order_shift: float
    unit_shift_field: float
    canonical_unit_field: float
    ratio: float


@dataclass(frozen=True)
class FringeProfile:
    """Two-beam intensity against screen position in fringe-order units."""

    positions: np.ndarray
    intensities: np.ndarray
    shift_orders: float


def kinematics_from_energy(T: float, consts: PhysConsts = CODATA2018) -> ElectronKinematics:
    """Relativistic electron kinematics for kinetic energy ``T`` [J]."""
    if not T > 0:
        raise DomainError(f"kinetic energy must be positive, got {T!r}")
    x = T / consts.rest_energy
    gamma = 1.0 + x
    # sqrt(1 - 1/gamma^2) written to stay accurate for T << m c^2
    beta = math.sqrt(x * (x + 2.0)) / gamma
    v_e = consts.c0 * beta
    p_e = gamma * consts.m_e * v_e
    return ElectronKinematics(T, v_e, gamma, p_e, consts.h / p_e)


def kinematics_from_speed(v_e: float, consts: PhysConsts = CODATA2018) -> ElectronKinematics:
    if not 0 < v_e < consts.c0:
        raise DomainError(f"electron speed must lie in (0, c0), got {v_e!r}")
    beta2 = (v_e / consts.c0) ** 2
    gamma = 1.0 / math.sqrt(1.0 - beta2)
    # gamma - 1 without cancellation
    T = consts.rest_energy * beta2 / (math.sqrt(1.0 - beta2) * (1.0 + math.sqrt(1.0 - beta2)))
    p_e = gamma * consts.m_e * v_e
    return ElectronKinematics(T, v_e, gamma, p_e, consts.h / p_e)


def deflection_angle(p_total: float, p_e: float) -> float:
    """Deflection [rad] of an electron of momentum ``p_e`` given transverse ``p_total``."""
    if not p_e > 0:
        raise DomainError(f"electron momentum must be positive, got {p_e!r}")
    return math.atan(-p_total / p_e)


def fringe_order_shift(delta: float, b: float, lambda_e: float) -> float:
    """2 b sin(delta) / lambda_e, the fringe displacement in orders."""
    if not (b > 0 and lambda_e > 0):
        raise DomainError(f"b and lambda_e must be positive, got b={b!r}, lambda_e={lambda_e!r}")
    return 2.0 * b * math.sin(delta) / lambda_e


def unit_shift_field_closed_form(s: SolenoidConfig, b: float,
                                 consts: PhysConsts = CODATA2018) -> float:
    """|B_i| for a one-order shift: (h/e) (1 - (pi R)^2/(4 b)^2) / S [T]."""
    if not b > s.R:
        raise DomainError(f"impact parameter b={b!r} must exceed R={s.R!r}")
    return consts.flux_quantum * (1.0 - pole_proximity(s.R, b)) / s.area


def _order_shift_at_field(s, beam, kin, consts, field, charges="approx"):
    coil = solenoid_for_field(s, field, consts)
    bd = total_transverse_momentum(coil, beam, consts, charges=charges)
    return fringe_order_shift(deflection_angle(bd.p_total, kin.p_e), beam.b, kin.lambda_e)


def unit_shift_field(s: SolenoidConfig, beam: BeamConfig, kin: ElectronKinematics,
                     consts: PhysConsts = CODATA2018) -> float:
    """Field magnitude [T] giving a shift of exactly one order, by inverting the pipeline.

    The root is found on the full momentum -> angle -> order chain and then
    compared with :func:`unit_shift_field_closed_form`, corrected by the
    factor tan(d1)/sin(d1), sin(d1) = lambda_e / (2 b), that the small-angle
    closed form drops. The factor is 1 + O(1e-19) for centimetre
    impact parameters and keV electrons.

    Raises
    ------
    ConsistencyError
        If the two routes differ by more than ``INVERSION_RTOL``.
    """
    check_geometry(s, beam)
    if not math.isclose(kin.v_e, beam.v_e, rel_tol=1e-12):
        raise DomainError(f"kinematics speed {kin.v_e!r} does not match beam speed {beam.v_e!r}")
    closed = unit_shift_field_closed_form(s, beam.b, consts)

    def residual(field):
        return _order_shift_at_field(s, beam, kin, consts, field) - 1.0

    # the chain is odd under reversal, so a negative v_q needs the opposite target
    if s.v_q < 0:
        def residual(field):
            return -_order_shift_at_field(s, beam, kin, consts, field) - 1.0

    # the closed form takes sin(delta) = tan(delta); undo that before comparing
    s_1 = kin.lambda_e / (2.0 * beam.b)
    if not s_1 < 1.0:
        raise DomainError(f"no one-order deflection exists: lambda_e / (2 b) = {s_1!r} >= 1")
    reference = closed * math.tan(math.asin(s_1)) / s_1
    root = optimize.brentq(residual, 0.5 * reference, 2.0 * reference, xtol=1e-300, rtol=1e-15)
    if abs(root - reference) > INVERSION_RTOL * reference:
        raise ConsistencyError(
            f"one-order field by inversion {root!r} T differs from closed form {reference!r} T"
        )
    return root


def canonical_unit_field(S: float, consts: PhysConsts = CODATA2018) -> float:
    """(h/e)/S, the field giving one flux quantum through area ``S`` [T]."""
    if not S > 0:
        raise DomainError(f"area must be positive, got {S!r}")
    return consts.flux_quantum / S


def model_to_canonical_ratio(s: SolenoidConfig, beam: BeamConfig, kin: ElectronKinematics,
                             consts: PhysConsts = CODATA2018) -> float:
    """Canonical one-order field divided by the model's one-order field."""
    return canonical_unit_field(s.area, consts) / unit_shift_field(s, beam, kin, consts)


def predict(s: SolenoidConfig, beam: BeamConfig, kin: ElectronKinematics,
            consts: PhysConsts = CODATA2018,
            charges: str = "approx") -> tuple[MomentumBreakdown, FringePrediction]:
    bd = total_transverse_momentum(s, beam, consts, charges=charges)
    delta = deflection_angle(bd.p_total, kin.p_e)
    unit = unit_shift_field(s, beam, kin, consts)
    canonical = canonical_unit_field(s.area, consts)
    return bd, FringePrediction(
        delta=delta,
        order_shift=fringe_order_shift(delta, beam.b, kin.lambda_e),
        unit_shift_field=unit,
        canonical_unit_field=canonical,
        ratio=canonical / unit,
    )


def fringe_profile(shift_orders: float, n_periods: int = 3, samples: int = 601) -> FringeProfile:
    """Ideal two-beam pattern cos^2(pi (u - shift)) for u in [-n_periods, n_periods].

    Raises
    ------
    SamplingError
        If ``samples < 16 n_periods`` (fewer than eight samples per fringe).
    """
    if n_periods < 1:
        raise SamplingError(f"n_periods must be at least 1, got {n_periods!r}")
    if samples < 2 * n_periods * 8:
        raise SamplingError(f"{samples} samples cannot resolve {2 * n_periods} fringes; need >= {16 * n_periods}")
    u = np.linspace(-n_periods, n_periods, samples)
    intensity = np.cos(np.pi * (u - shift_orders)) ** 2
    return FringeProfile(u, np.clip(intensity, 0.0, 1.0), float(shift_orders))
