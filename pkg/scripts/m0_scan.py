"""Tabulate F_pp and det for the a4 problem along M to show where each changes sign."""
import argparse
import csv
import sys

import numpy as np

from bombieri.integrator import IntegratorOptions
from bombieri.problem import ProblemSpec
from bombieri.variational import hessian_of_F


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=11.01)
    ap.add_argument("--hi", type=float, default=60.0)
    ap.add_argument("--points", type=int, default=60)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    integ = IntegratorOptions(steps=args.steps)
    stream = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["M", "fpp", "fqq", "fpq", "det"])
    for M in np.geomspace(args.lo, args.hi, args.points):
        h = hessian_of_F(ProblemSpec.a4_bound(M), integ)
        writer.writerow([f"{v:.10g}" for v in (M, h.fpp, h.fqq, h.fpq, h.det)])
    if args.out:
        stream.close()


if __name__ == "__main__":
    main()
