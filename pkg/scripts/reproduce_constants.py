"""Solve every extremal problem and print a table of the constants."""
import argparse
import time

from bombieri.closed_form import sigma32
from bombieri.errors import BombieriError
from bombieri.integrator import IntegratorOptions
from bombieri.solver import PROBLEMS, RootScanConfig, solve

PUBLISHED = {"sigma32": sigma32(), "sigma42": 0.050057, "sigma24": 0.969556, "sigma34": 0.791557, "m0": 22.9569}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--method", default="rk4")
    ap.add_argument("--grid", type=int, default=200)
    args = ap.parse_args()
    cfg = RootScanConfig(scan_points=args.grid, integ=IntegratorOptions(args.method, args.steps))
    print(f"{'problem':8} {'value':>14} {'reference':>12} {'diff':>10}  attained_by   seconds")
    for name in PROBLEMS:
        t0 = time.perf_counter()
        ref = PUBLISHED[name]
        try:
            res = solve(name, cfg)
        except BombieriError as exc:
            print(f"{name:8} {'-':>14} {ref:12.6f} {'-':>10}  failed: {exc}")
            continue
        print(f"{name:8} {res.value:14.9f} {ref:12.6f} {res.value - ref:10.2e}  {res.attained_by:12} "
              f"{time.perf_counter() - t0:7.1f}")


if __name__ == "__main__":
    main()
