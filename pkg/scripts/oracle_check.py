"""Compare the finite-difference Hessian of the brute-force simulation with the variational one."""
import argparse

from bombieri.integrator import IntegratorOptions
from bombieri.oracle import fd_hessian
from bombieri.problem import ProblemSpec
from bombieri.variational import hessian_of_F

POINTS = [
    ProblemSpec.linear(0.0, -0.03),
    ProblemSpec.linear(-0.1, -0.05),
    ProblemSpec.linear(0.2, 0.1, 25.0),
    ProblemSpec.sigma24(-0.5),
    ProblemSpec.sigma24(0.5),
    ProblemSpec.sigma34(-0.5),
    ProblemSpec.sigma34(0.3),
    ProblemSpec.a4_bound(15.0),
    ProblemSpec.a4_bound(30.0),
    ProblemSpec.a4_bound(100.0),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--h", type=float, default=1e-3)
    args = ap.parse_args()
    integ = IntegratorOptions(steps=args.steps)
    print(f"{'variant':8} {'mu':>6} {'nu':>6} {'M':>6} {'fpp':>12} {'fqq':>12} {'fpq':>12} {'max diff':>10}")
    for spec in POINTS:
        fd, var = fd_hessian(spec, args.h, integ), hessian_of_F(spec, integ)
        diff = max(abs(fd.fpp - var.fpp), abs(fd.fqq - var.fqq), abs(fd.fpq - var.fpq))
        print(f"{spec.variant.value:8} {spec.mu:6.2f} {spec.nu:6.2f} {spec.M:6.0f} "
              f"{var.fpp:12.6f} {var.fqq:12.6f} {var.fpq:12.6f} {diff:10.2e}")


if __name__ == "__main__":
    main()
