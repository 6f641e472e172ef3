"""Compare per-turn effective charges from three routes across electron speeds.

Columns: the linearised charge, the exact-gamma charge at the mean carrier
speed, and the phi-resolved exact-gamma quadrature. The exact/linearised
column tracks gamma^3; the phi-resolved/exact column stays within
10 v_q / v_e.

Usage: python3 scripts/phi_shortcut_error.py
"""

import csv
import sys

import numpy as np

from abdipole import SolenoidConfig, model
from abdipole.oracle import oracle_phi_resolved_charge


def main():
    s = SolenoidConfig(R=0.01, n=1e4, Z=1e10, q_mag=1.602176634e-19, v_q=1e-3)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["v_e", "gamma", "gamma_cubed", "exact_over_linear", "phi_over_exact_minus_1", "bound"])
    for v_e in np.geomspace(1e5, 2.9e8, 15):
        g = model.lorentz_factor(v_e)
        lin, _ = model.effective_charge_approx(s, v_e)
        ex, _ = model.effective_charge_exact(s, v_e)
        phi, _ = oracle_phi_resolved_charge(s, v_e, lorentz="exact")
        out.writerow([f"{v_e:.6g}", f"{g:.12g}", f"{g**3:.12g}", f"{ex / lin:.12g}",
                      f"{phi.value / ex - 1:.3e}", f"{10 * s.v_q / v_e:.3e}"])


if __name__ == "__main__":
    main()
