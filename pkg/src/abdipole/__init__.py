"""Relativistic electric-dipole model of the Aharonov-Bohm fringe shift.

A solenoid's drifting carriers, seen from a passing electron at different
relative speeds on the two halves of each winding, present a net effective
charge. The resulting transverse momentum deflects the electron and shifts
a two-beam interference pattern; this package computes that chain in closed
form and cross-checks it by quadrature.
"""

from .constants import CODATA2018, PhysConsts
from .errors import (
    ConsistencyError,
    DomainError,
    PoleWarning,
    QuadratureError,
    RegimeError,
    RegimeWarning,
    SamplingError,
)
from .interferometry import (
    ElectronKinematics,
    FringePrediction,
    FringeProfile,
    canonical_unit_field,
    deflection_angle,
    fringe_order_shift,
    fringe_profile,
    kinematics_from_energy,
    kinematics_from_speed,
    model_to_canonical_ratio,
    predict,
    unit_shift_field,
    unit_shift_field_closed_form,
)
from .model import (
    BeamConfig,
    MomentumBreakdown,
    Side,
    SolenoidConfig,
    total_transverse_momentum,
)
from .oracle import QuadResult

__version__ = "0.1.0"
