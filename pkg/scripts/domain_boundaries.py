"""Locate the edges of the admissible parameter ranges."""
import math

from bombieri.admissibility import boundary_scan
from bombieri.problem import Variant

CASES = [
    ("L, mu axis (nu=0)", Variant.LFUNCTIONAL, "mu", (-0.3, 0.0), {}, -0.25),
    ("L, nu axis (mu=0)", Variant.LFUNCTIONAL, "nu", (-0.2, 0.0), {}, -0.1),
    ("sigma24, nu axis", Variant.SIGMA24, "nu", (-1.5, 0.0), {}, -1.0),
    ("sigma34, mu axis", Variant.SIGMA34, "mu", (-1.0, 0.0), {}, -2 * (math.sqrt(2) - 1)),
    ("a4 bound, M axis", Variant.A4BOUND, "M", (5.0, 20.0), {}, 11.0),
]

if __name__ == "__main__":
    for label, variant, axis, interval, fixed, expected in CASES:
        b = boundary_scan(variant, axis, interval, tol=1e-9, **fixed)
        print(f"{label:20} {b:14.9f}   expected {expected:12.9f}   diff {b - expected:9.2e}")
