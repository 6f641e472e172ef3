import math

import mpmath
import pytest
from hypothesis import strategies as st

from abdipole import CODATA2018, BeamConfig, Side, SolenoidConfig, kinematics_from_energy
from abdipole.interferometry import EV

E = 1.602176634e-19


@pytest.fixture
def coil():
    return SolenoidConfig(R=0.01, n=1.0e4, Z=1.0e10, q_mag=E, v_q=1.0e-3)


@pytest.fixture
def kin30():
    return kinematics_from_energy(30.0e3 * EV)


@pytest.fixture
def beam30(kin30):
    return BeamConfig(v_e=kin30.v_e, b=0.02)


def log_uniform(lo, hi):
    return st.floats(math.log10(lo), math.log10(hi)).map(lambda x: 10.0**x)


@st.composite
def configs(draw, b_over_r=(1.05, 100.0), vq_over_ve=(1e-12, 1e-2)):
    """Random valid (solenoid, beam) pairs."""
    R = draw(log_uniform(1e-5, 1.0))
    n = draw(log_uniform(1e2, 1e6))
    Z = draw(log_uniform(1e3, 1e20))
    v_e = draw(log_uniform(1e5, 2.5e8))
    ratio = draw(log_uniform(*vq_over_ve))
    b = R * draw(st.floats(*b_over_r))
    side = draw(st.sampled_from(list(Side)))
    return SolenoidConfig(R=R, n=n, Z=Z, q_mag=E, v_q=ratio * v_e), BeamConfig(v_e=v_e, b=b, side=side)


def mp_gamma(v, c0=CODATA2018.c0):
    v = mpmath.mpf(v)
    return 1 / mpmath.sqrt(1 - (v / mpmath.mpf(c0)) ** 2)
