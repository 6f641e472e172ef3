"""Tabulate the canonical-to-model one-order field ratio against b/R.

Usage: python3 scripts/ratio_curve.py [--points 40] [--max-ratio 1000]
"""

import argparse
import csv
import math
import sys

import numpy as np

from abdipole import BeamConfig, SolenoidConfig
from abdipole import interferometry as ifm


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--max-ratio", type=float, default=1000.0)
    ap.add_argument("--kev", type=float, default=30.0)
    args = ap.parse_args(argv)

    s = SolenoidConfig(R=0.01, n=1e4, Z=1e10, q_mag=1.602176634e-19, v_q=1e-3)
    kin = ifm.kinematics_from_energy(args.kev * 1e3 * ifm.EV)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["b_over_R", "ratio", "closed_form", "ratio_minus_1"])
    for k in np.geomspace(1.05, args.max_ratio, args.points):
        r = ifm.model_to_canonical_ratio(s, BeamConfig(kin.v_e, k * s.R), kin)
        closed = 1.0 / (1.0 - math.pi**2 / (16.0 * k * k))
        out.writerow([f"{k:.6g}", f"{r:.15g}", f"{closed:.15g}", f"{r - 1:.6e}"])


if __name__ == "__main__":
    main()
