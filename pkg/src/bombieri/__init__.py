"""Local extremality of the Koebe and Pick functions via optimal control.

Computes the Bombieri numbers sigma_32, sigma_42, sigma_24, sigma_34 and the
threshold M0 for Re a4 on bounded univalent functions from the second
variation of the Löwner coefficient system about the control ``u = pi``.
"""
__version__ = "0.1.0"

from .admissibility import AdmissibilityReport, boundary_scan, check_admissible
from .closed_form import fpp_closed, sigma32
from .integrator import IntegratorOptions, integrate
from .problem import ProblemSpec, Variant, base_adjoint, base_state, pick_coefficients
from .solver import RootScanConfig, SolverResult, solve
from .variational import HessianF, hessian_of_F

__all__ = [
    "AdmissibilityReport",
    "HessianF",
    "IntegratorOptions",
    "ProblemSpec",
    "RootScanConfig",
    "SolverResult",
    "Variant",
    "base_adjoint",
    "base_state",
    "boundary_scan",
    "check_admissible",
    "fpp_closed",
    "hessian_of_F",
    "integrate",
    "pick_coefficients",
    "sigma32",
    "solve",
]
