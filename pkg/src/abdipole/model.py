"""Closed-form pipeline: solenoid current -> effective charges -> transverse momentum.

Geometry: the solenoid axis is ``z``, electrons travel along ``+y`` at
``x = +b`` (``Side.PLUS_X``) or ``x = -b`` (``Side.MINUS_X``). The mobile
carriers in the windings are negative charges ``-q_mag`` drifting at ``v_q``;
a negative ``v_q`` reverses the circulation.

Momenta returned by :func:`momentum_kernel` and :func:`side_momentum` are
radial, positive meaning repulsion away from the source charge.
:class:`MomentumBreakdown` stores lab-frame ``x`` components.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .constants import CODATA2018, PhysConsts
from .errors import DomainError, PoleWarning, RegimeError, RegimeWarning

__all__ = [
    "Side",
    "SolenoidConfig",
    "BeamConfig",
    "MomentumBreakdown",
    "coil_current",
    "solenoid_field",
    "solenoid_for_field",
    "cg_offsets",
    "effective_impact_parameters",
    "mean_parallel_speed",
    "momentum_kernel",
    "lorentz_factor",
    "lorentz_difference",
    "shifted_lorentz_factors",
    "effective_charge_exact",
    "effective_charge_approx",
    "winding_integrated_charge",
    "side_momentum",
    "side_momentum_closed_form",
    "total_momentum_closed_form",
    "pole_proximity",
    "check_geometry",
    "check_regime",
    "total_transverse_momentum",
]

REGIME_MIN_RATIO = 10.0
REGIME_WARN_RATIO = 100.0
POLE_WARN_MARGIN = 0.05


class Side(str, enum.Enum):
    PLUS_X = "plus_x"
    MINUS_X = "minus_x"

    @property
    def orientation(self) -> float:
        """Lab-frame sign of the outward radial direction at the beam."""
        return 1.0 if self is Side.PLUS_X else -1.0


@dataclass(frozen=True)
class SolenoidConfig:
    """Coil geometry and drive.

    Parameters
    ----------
    R : coil radius [m]
    n : winding density [1/m]
    Z : number of mobile charges per winding
    q_mag : magnitude of one mobile charge [C]
    v_q : signed drift speed of the carriers [m/s]
    """

    R: float
    n: float
    Z: float
    q_mag: float
    v_q: float = 0.0

    def __post_init__(self):
        for name in ("R", "n", "Z", "q_mag"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"solenoid {name} must be finite and positive, got {value!r}")
        if not math.isfinite(self.v_q):
            raise DomainError(f"solenoid v_q must be finite, got {self.v_q!r}")

    @property
    def area(self) -> float:
        """Cross-section S = pi R^2 [m^2]."""
        return math.pi * self.R**2

    @property
    def current(self) -> float:
        return coil_current(self)

    def field(self, consts: PhysConsts = CODATA2018) -> float:
        return solenoid_field(self, consts)


@dataclass(frozen=True)
class BeamConfig:
    """Test-electron speed ``v_e`` [m/s], impact parameter ``b`` [m] and side."""

    v_e: float
    b: float
    side: Side = Side.PLUS_X

    def __post_init__(self):
        if not (math.isfinite(self.v_e) and self.v_e > 0):
            raise DomainError(f"beam v_e must be positive, got {self.v_e!r}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise DomainError(f"beam b must be positive, got {self.b!r}")
        object.__setattr__(self, "side", Side(self.side))


@dataclass(frozen=True)
class MomentumBreakdown:
    """All intermediates of one pipeline evaluation.

    ``*_minus`` quantities belong to the semicircle whose carriers move with
    the electron, ``*_plus`` to the counter-moving one. ``b_eff_*`` is the
    distance from the beam to that semicircle's centroid. ``p_minus``,
    ``p_plus`` and ``p_total`` are lab-frame x components [kg m/s];
    ``p_total_closed`` is the independent closed-form total.
    """

    b_eff_minus: float
    b_eff_plus: float
    mean_vqy: float
    gamma: float
    gamma_minus: float
    gamma_plus: float
    dq_eff_minus: float
    dq_eff_plus: float
    q_eff_minus: float
    q_eff_plus: float
    p_minus: float
    p_plus: float
    p_total: float
    p_total_closed: float
    pole_proximity: float
    charges: str


def coil_current(s: SolenoidConfig) -> float:
    """Current carried by the negative drifting charges [A]."""
    return -s.Z * s.q_mag * s.v_q / (2.0 * math.pi * s.R)


def solenoid_field(s: SolenoidConfig, consts: PhysConsts = CODATA2018) -> float:
    """Signed interior flux density B_i = mu0 n I [T]."""
    return consts.mu0 * s.n * coil_current(s)


def solenoid_for_field(s: SolenoidConfig, field_magnitude: float,
                       consts: PhysConsts = CODATA2018) -> SolenoidConfig:
    """Copy of ``s`` with ``v_q`` chosen so that ``|B_i| == field_magnitude``.

    The drift direction of ``s`` is kept (positive ``v_q`` if ``s.v_q == 0``).
    """
    sign = -1.0 if s.v_q < 0 else 1.0
    v_q = sign * field_magnitude * 2.0 * math.pi * s.R / (consts.mu0 * s.n * s.Z * s.q_mag)
    return SolenoidConfig(R=s.R, n=s.n, Z=s.Z, q_mag=s.q_mag, v_q=v_q)


def cg_offsets(R: float) -> tuple[float, float]:
    """x coordinates (xi_plus, xi_minus) of the two semicircle centroids [m].

    The centroid is weighted by the carrier velocity component along the
    beam; its closed form is ``+-pi R / 4``.
    """
    if R < 0:
        raise DomainError(f"radius must be non-negative, got {R!r}")
    xi = math.pi * R / 4.0
    return xi, -xi


def effective_impact_parameters(b: float, R: float) -> tuple[float, float]:
    """(b - pi R/4, b + pi R/4): distances to the two centroids [m].

    Raises
    ------
    DomainError
        If ``b <= R``. The beam must pass outside the coil, which also keeps
        clear of the pole of the total momentum at ``b = pi R / 4``.
    """
    if R < 0:
        raise DomainError(f"radius must be non-negative, got {R!r}")
    if R > 0 and not b > R:
        raise DomainError(
            f"impact parameter b={b!r} must exceed the coil radius R={R!r}; "
            f"the closed-form total diverges at b = pi R/4 = {math.pi * R / 4:.6g}"
        )
    if not b > 0:
        raise DomainError(f"impact parameter must be positive, got {b!r}")
    xi, _ = cg_offsets(R)
    return b - xi, b + xi


def mean_parallel_speed(v_q: float) -> float:
    """Semicircle average of the carrier velocity component along y: 2 v_q / pi."""
    return 2.0 * v_q / math.pi


def momentum_kernel(Q1: float, Q2: float, b: float, v: float,
                    consts: PhysConsts = CODATA2018) -> float:
    """Transverse momentum exchanged by two charges passing at distance ``b``.

    ``Q1*Q2 / (2 pi eps0 b v)``; positive is repulsive.
    """
    if not b > 0:
        raise DomainError(f"kernel distance must be positive, got {b!r}")
    if not v > 0:
        raise DomainError(f"kernel relative speed must be positive, got {v!r}")
    return Q1 * Q2 / (2.0 * math.pi * consts.eps0 * b * v)


def lorentz_factor(v: float, consts: PhysConsts = CODATA2018) -> float:
    beta2 = (v / consts.c0) ** 2
    if not beta2 < 1.0:
        raise DomainError(f"speed {v!r} m/s is not below c0 = {consts.c0!r} m/s")
    return 1.0 / math.sqrt(1.0 - beta2)


def lorentz_difference(v: float, dv: float, consts: PhysConsts = CODATA2018) -> float:
    """gamma(v) - gamma(v - dv) without cancellation.

    Uses ``g1 - g2 = g1 g2 dv (2v - dv) / (c^2 (1/g1 + 1/g2))``, an exact
    rearrangement in which the small speed difference ``dv`` enters directly,
    so it keeps full precision even when ``dv`` is far below the ulp of ``v``.
    """
    g1 = lorentz_factor(v, consts)
    g2 = lorentz_factor(v - dv, consts)
    return g1 * g2 * dv * (2.0 * v - dv) / (consts.c0**2 * (1.0 / g1 + 1.0 / g2))


def shifted_lorentz_factors(v_e: float, v_q: float,
                            consts: PhysConsts = CODATA2018) -> tuple[float, float]:
    """Lorentz factors of the co-moving and counter-moving carriers, as seen by the beam."""
    u = mean_parallel_speed(v_q)
    return lorentz_factor(v_e - u, consts), lorentz_factor(v_e + u, consts)


def effective_charge_exact(s: SolenoidConfig, v_e: float,
                           consts: PhysConsts = CODATA2018) -> tuple[float, float]:
    """Per-turn effective charges (dq_minus, dq_plus) [C] with exact Lorentz factors."""
    u = mean_parallel_speed(s.v_q)
    half = 0.5 * s.Z * s.q_mag
    return (half * lorentz_difference(v_e, u, consts),
            half * lorentz_difference(v_e, -u, consts))


def effective_charge_approx(s: SolenoidConfig, v_e: float,
                            consts: PhysConsts = CODATA2018) -> tuple[float, float]:
    """Per-turn effective charges +-Z q v_e v_q / (pi c0^2), valid for v_e >> v_q."""
    check_regime(s, v_e)
    dq = s.Z * s.q_mag * v_e * s.v_q / (math.pi * consts.c0**2)
    return dq, -dq


def winding_integrated_charge(dq_eff: float, n: float, b: float) -> float:
    """Effective charge of the whole coil projected on the beam normal: pi n b dq."""
    if not (n > 0 and b > 0):
        raise DomainError(f"winding density and impact parameter must be positive, got n={n!r}, b={b!r}")
    return math.pi * n * b * dq_eff


def side_momentum(q_eff: float, b_eff: float, v_e: float,
                  consts: PhysConsts = CODATA2018) -> float:
    """Radial momentum given to the electron by one centroid charge."""
    return momentum_kernel(-consts.e_mag, q_eff, b_eff, v_e, consts)


def side_momentum_closed_form(s: SolenoidConfig, b: float, b_eff: float, sign: float,
                              consts: PhysConsts = CODATA2018) -> float:
    """``sign * mu0 e n b Z q v_q / (2 pi b_eff)``: the reduced per-side momentum.

    ``sign`` is -1 for the co-moving semicircle and +1 for the counter-moving one.
    """
    return sign * consts.mu0 * consts.e_mag * s.n * b * s.Z * s.q_mag * s.v_q / (2.0 * math.pi * b_eff)


def pole_proximity(R: float, b: float) -> float:
    """(pi R)^2 / (16 b^2); the total momentum diverges as this approaches 1."""
    return (math.pi * R) ** 2 / (16.0 * b**2)


def total_momentum_closed_form(s: SolenoidConfig, b: float,
                               consts: PhysConsts = CODATA2018) -> float:
    """-e S B_i / (2 b [1 - (pi R)^2/(4 b)^2]) with the signed electron charge."""
    e = -consts.e_mag
    return -e * s.area * solenoid_field(s, consts) / (2.0 * b * (1.0 - pole_proximity(s.R, b)))


def check_geometry(s: SolenoidConfig, beam: BeamConfig) -> None:
    effective_impact_parameters(beam.b, s.R)


def check_regime(s: SolenoidConfig, v_e: float) -> None:
    """Enforce v_e >= 10 |v_q|; warn below 100 |v_q|."""
    vq = abs(s.v_q)
    if vq == 0:
        return
    if v_e < REGIME_MIN_RATIO * vq:
        raise RegimeError(
            f"v_e = {v_e!r} m/s is below {REGIME_MIN_RATIO:g} |v_q| = {REGIME_MIN_RATIO * vq!r} m/s"
        )
    if v_e < REGIME_WARN_RATIO * vq:
        warnings.warn(f"v_e/|v_q| = {v_e / vq:.3g} is below {REGIME_WARN_RATIO:g}", RegimeWarning,
                      stacklevel=3)


def total_transverse_momentum(s: SolenoidConfig, beam: BeamConfig,
                              consts: PhysConsts = CODATA2018,
                              charges: str = "approx") -> MomentumBreakdown:
    """Run the full pipeline for one beam.

    Parameters
    ----------
    charges : {"approx", "exact"}
        ``"approx"`` uses the small-drift linearised effective charges, which
        the closed-form total is built on; ``"exact"`` uses exact Lorentz
        factors at the mean carrier speed.
    """
    check_geometry(s, beam)
    check_regime(s, beam.v_e)
    v_e = beam.v_e
    near, far = effective_impact_parameters(beam.b, s.R)
    # beam at -b sits next to the semicircle whose carriers run against it
    if beam.side is Side.PLUS_X:
        b_minus, b_plus = near, far
    else:
        b_minus, b_plus = far, near

    gamma = lorentz_factor(v_e, consts)
    gamma_minus, gamma_plus = shifted_lorentz_factors(v_e, s.v_q, consts)
    if charges == "approx":
        dq_minus, dq_plus = effective_charge_approx(s, v_e, consts)
    elif charges == "exact":
        dq_minus, dq_plus = effective_charge_exact(s, v_e, consts)
    else:
        raise ValueError(f"charges must be 'approx' or 'exact', got {charges!r}")

    q_minus = winding_integrated_charge(dq_minus, s.n, beam.b)
    q_plus = winding_integrated_charge(dq_plus, s.n, beam.b)
    orient = beam.side.orientation
    p_minus = orient * side_momentum(q_minus, b_minus, v_e, consts)
    p_plus = orient * side_momentum(q_plus, b_plus, v_e, consts)

    proximity = pole_proximity(s.R, beam.b)
    if 1.0 - proximity < POLE_WARN_MARGIN:
        warnings.warn(f"1 - (pi R)^2/(16 b^2) = {1 - proximity:.3g} is near the pole", PoleWarning,
                      stacklevel=2)

    return MomentumBreakdown(
        b_eff_minus=b_minus,
        b_eff_plus=b_plus,
        mean_vqy=mean_parallel_speed(s.v_q),
        gamma=gamma,
        gamma_minus=gamma_minus,
        gamma_plus=gamma_plus,
        dq_eff_minus=dq_minus,
        dq_eff_plus=dq_plus,
        q_eff_minus=q_minus,
        q_eff_plus=q_plus,
        p_minus=p_minus,
        p_plus=p_plus,
        p_total=p_minus + p_plus,
        p_total_closed=total_momentum_closed_form(s, beam.b, consts),
        pole_proximity=proximity,
        charges=charges,
    )
