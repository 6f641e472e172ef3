"""Show S [B_i]_1 / (h/e) approaching one as the beam moves away from the coil.

Usage: python3 scripts/flux_limit.py
"""

from abdipole import CODATA2018, BeamConfig, SolenoidConfig
from abdipole import interferometry as ifm


def main():
    s = SolenoidConfig(R=0.01, n=1e4, Z=1e10, q_mag=1.602176634e-19, v_q=1e-3)
    kin = ifm.kinematics_from_energy(30e3 * ifm.EV)
    print("b_over_R,unit_field_T,flux_over_h_e")
    for k in (1.1, 1.5, 2, 5, 10, 100, 1e3, 1e4):
        field = ifm.unit_shift_field(s, BeamConfig(kin.v_e, k * s.R), kin)
        print(f"{k:g},{field:.12e},{s.area * field / CODATA2018.flux_quantum:.12f}")


if __name__ == "__main__":
    main()
