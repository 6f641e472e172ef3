"""Numerical-quadrature recomputation of the closed-form integrals.

These routines deliberately avoid the closed forms in :mod:`abdipole.model`;
they integrate the underlying expressions and report an error estimate so
tests and ``abdipole validate`` can compare the two routes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
from scipy import integrate

from .constants import CODATA2018, PhysConsts
from .errors import DomainError, QuadratureError
from .model import SolenoidConfig, check_regime

__all__ = [
    "QuadResult",
    "oracle_half_circle_weight",
    "oracle_cg",
    "oracle_winding_integral",
    "oracle_phi_resolved_charge",
]

SMOOTH_RTOL = 1e-13
WINDING_RTOL = 1e-11
EXTENDED_DPS = 50


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be non-negative")
        if not self.evaluations > 0:
            raise ValueError("evaluations must be positive")


def _quad(f, a, b, rtol=SMOOTH_RTOL, accept=1e-12, what="integral"):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err, info = integrate.quad(f, a, b, epsabs=0.0, epsrel=rtol, limit=200,
                                              full_output=True)[:3]
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"{what} did not converge: {exc}") from exc
    if err > max(accept * abs(value), 1e-300):
        raise QuadratureError(f"{what}: error estimate {err:.3e} too large for value {value:.6e}")
    return QuadResult(value, err, info["neval"])


def oracle_half_circle_weight(R: float, v_q: float) -> QuadResult:
    """Integrate R v_q sin(phi) over the half circle [0, pi]."""
    if not R > 0:
        raise DomainError(f"radius must be positive, got {R!r}")
    return _quad(lambda phi: R * v_q * math.sin(phi), 0.0, math.pi, what="half-circle weight")


def oracle_cg(R: float, v_q: float = 1.0) -> QuadResult:
    """Centroid offset of a semicircle weighted by the carrier velocity along the beam.

    Computes ``(R^2 v_q / M) * int_0^pi sin^2`` with ``M`` itself taken from
    :func:`oracle_half_circle_weight`. The result does not depend on ``v_q``.
    """
    if v_q == 0:
        raise DomainError("centroid is undefined for zero drift speed")
    weight = oracle_half_circle_weight(R, v_q)
    moment = _quad(lambda phi: R**2 * v_q * math.sin(phi) ** 2, 0.0, math.pi, what="centroid moment")
    value = moment.value / weight.value
    err = abs(value) * (moment.abs_error_estimate / abs(moment.value)
                        + weight.abs_error_estimate / abs(weight.value))
    return QuadResult(value, err, weight.evaluations + moment.evaluations)


def oracle_winding_integral(n: float, b: float, dq: float, component: str = "x") -> QuadResult:
    """Sum the per-turn charge over all windings, projected on the beam normal.

    The integrand over the axial coordinate ``z`` is
    ``n dq b^2 / (b^2 + z^2)`` (``component="x"``) or the axial projection
    ``n dq b z / (b^2 + z^2)`` (``component="z"``). The infinite range is
    mapped by ``z = b tan(psi)`` onto ``(-pi/2, pi/2)``.

    The axial integrand decays only as 1/z, so for ``component="z"`` the
    range is the symmetric principal-value window ``|z| <= 1e6 b``.
    """
    if not b > 0:
        raise DomainError(f"impact parameter must be positive, got {b!r}")

    if component == "x":
        def dens(z):
            return n * dq * b * b / (b * b + z * z)
        lim = math.pi / 2
    elif component == "z":
        def dens(z):
            return n * dq * b * z / (b * b + z * z)
        lim = math.atan(1e6)
    else:
        raise ValueError(f"component must be 'x' or 'z', got {component!r}")

    def mapped(psi):
        c = math.cos(psi)
        return dens(b * math.tan(psi)) * b / (c * c)

    if component == "z":
        # odd integrand: the reference scale for convergence is the one-sided half
        half = _quad(mapped, 0.0, lim, rtol=WINDING_RTOL, accept=1e-9, what="axial winding integral")
        other = _quad(mapped, -lim, 0.0, rtol=WINDING_RTOL, accept=1e-9, what="axial winding integral")
        return QuadResult(half.value + other.value, half.abs_error_estimate + other.abs_error_estimate,
                          half.evaluations + other.evaluations)
    return _quad(mapped, -lim, lim, rtol=WINDING_RTOL, accept=1e-9, what="winding integral")


def oracle_phi_resolved_charge(s: SolenoidConfig, v_e: float, consts: PhysConsts = CODATA2018,
                               lorentz: str = "exact",
                               dps: int = EXTENDED_DPS) -> tuple[QuadResult, QuadResult]:
    """Per-turn effective charges with the Lorentz factor averaged over phi.

    Evaluates ``(Z q / 2 pi) int [gamma(v_e) - gamma(|v_e - v_q sin phi|)] dphi``
    over ``[0, pi]`` and ``[pi, 2 pi]`` at ``dps`` decimal digits, instead of
    taking the Lorentz factor at the mean carrier velocity.

    Parameters
    ----------
    lorentz : {"exact", "expanded"}
        ``"expanded"`` replaces gamma(v) by 1 + v^2 / (2 c0^2).
    """
    check_regime(s, v_e)
    if lorentz not in ("exact", "expanded"):
        raise ValueError(f"lorentz must be 'exact' or 'expanded', got {lorentz!r}")

    with mpmath.workdps(dps):
        c2 = mpmath.mpf(consts.c0) ** 2
        ve = mpmath.mpf(v_e)
        vq = mpmath.mpf(s.v_q)
        if lorentz == "exact":
            def gamma(v):
                beta2 = v * v / c2
                if beta2 >= 1:
                    raise DomainError(f"speed {float(v)!r} m/s reaches c0")
                return 1 / mpmath.sqrt(1 - beta2)
        else:
            def gamma(v):
                return 1 + v * v / (2 * c2)

        prefactor = mpmath.mpf(s.Z) * mpmath.mpf(s.q_mag) / (2 * mpmath.pi)
        floor = mpmath.mpf(10) ** (-(dps - 8)) * gamma(ve)
        out = []
        for a, b in ((0, mpmath.pi), (mpmath.pi, 2 * mpmath.pi)):
            count = 0

            def integrand(phi):
                nonlocal count
                count += 1
                # both terms at the same working precision, so v_q = 0 gives exactly zero
                return gamma(ve) - gamma(abs(ve - vq * mpmath.sin(phi)))

            value, err = mpmath.quad(integrand, [a, b], error=True)
            if err > 1e-15 * abs(value) + floor:
                raise QuadratureError(f"phi-resolved charge: error {float(err):.3e} vs value {float(value):.3e}")
            out.append(QuadResult(float(prefactor * value), float(abs(prefactor) * err), count))
    return out[0], out[1]
