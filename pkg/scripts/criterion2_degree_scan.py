"""Gram deviation of the truncated TM basis versus truncation degree.

Shows why a fixed degree N=256 cannot hold orthonormality at M_max=16 when
zeros approach |alpha| = 0.8, and that the auto-degree basis does.
"""

import argparse

import numpy as np

from hardylab.basis import TMBasis
from hardylab.blaschke import BlaschkeProduct


def deviation(basis):
    return float(np.abs(basis.gram() - np.eye(basis.n * (basis.m_max + 1))).max())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=16)
    ap.add_argument("--rho", type=float, nargs="+", default=[0.5, 0.6, 0.7, 0.75, 0.8])
    args = ap.parse_args(argv)
    degrees = (256, 512, 1024, 2048)
    print("zeros".ljust(22) + "".join(f"N={d}".rjust(12) for d in degrees) + "auto N".rjust(10) + "auto dev".rjust(12))
    for rho in args.rho:
        for zeros in ([0, rho], [0, rho, rho], [0, rho, -rho]):
            B = BlaschkeProduct(zeros)
            devs = [deviation(TMBasis(B, m_max=args.m_max, degree=d, strict=False)) for d in degrees]
            auto = TMBasis(B, m_max=args.m_max)
            print(str(zeros).ljust(22) + "".join(f"{v:12.2e}" for v in devs)
                  + f"{auto.degree:10d}{deviation(auto):12.2e}")


if __name__ == "__main__":
    main()
