"""SI physical constants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import DomainError

__all__ = ["PhysConsts", "CODATA2018"]


@dataclass(frozen=True)
class PhysConsts:
    """Physical constants in SI units.

    Defaults are the CODATA 2018 recommended values. ``strict`` controls
    whether the electromagnetic consistency relation ``eps0*mu0*c0**2 == 1``
    is enforced at construction (relative tolerance ``1e-9``).
    """

    c0: float = 299792458.0
    mu0: float = 1.25663706212e-6
    eps0: float = 8.8541878128e-12
    h: float = 6.62607015e-34
    e_mag: float = 1.602176634e-19
    m_e: float = 9.1093837015e-31
    strict: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for f in fields(self):
            if f.name == "strict":
                continue
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"constant {f.name} must be finite and positive, got {value!r}")
        if self.strict and abs(self.consistency_residual()) > 1e-9:
            raise DomainError(
                "inconsistent constants: eps0*mu0*c0**2 - 1 = "
                f"{self.consistency_residual():.3e} exceeds 1e-9"
            )

    def consistency_residual(self) -> float:
        """Return ``eps0*mu0*c0**2 - 1``."""
        return self.eps0 * self.mu0 * self.c0**2 - 1.0

    @property
    def flux_quantum(self) -> float:
        """h/e in webers (the single-charge flux quantum)."""
        return self.h / self.e_mag

    @property
    def rest_energy(self) -> float:
        """Electron rest energy m_e c0^2 in joules."""
        return self.m_e * self.c0**2

    def replace(self, **changes) -> "PhysConsts":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return PhysConsts(**values)


CODATA2018 = PhysConsts()
