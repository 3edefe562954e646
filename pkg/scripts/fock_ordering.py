"""Which order of rotation and squeeze does S = cosh(r)e^{i phi} ... describe?

Builds both cascades, conjugates the mode operator in a truncated Fock space
and reports the Heisenberg residual of each ordering against the closed-form S.
"""
import argparse

import numpy as np

from sympleq.core import Rotation, Squeeze, SymplecticPair
from sympleq.fock import FockRep, heisenberg_check
from sympleq.fundamental import general_symplectic, hamiltonian_of


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, default=0.4)
    ap.add_argument("--theta", type=float, default=1.0)
    ap.add_argument("--phi", type=float, default=0.4)
    ap.add_argument("--d", type=int, default=40)
    args = ap.parse_args()
    R = Rotation([[args.phi]])
    Z = Squeeze.polar(args.r, args.theta)
    closed = general_symplectic(Z.z, R.phi)
    pair = SymplecticPair(closed.E, closed.F)
    rep = FockRep(1, args.d)
    for label, steps in (("rotation first, then squeeze", [R, Z]), ("squeeze first, then rotation", [Z, R])):
        rpt = heisenberg_check([hamiltonian_of(p) for p in steps], pair, rep, retry=False)
        print(f"{label:32s} residual {rpt.residual:.3e}")


if __name__ == "__main__":
    main()
