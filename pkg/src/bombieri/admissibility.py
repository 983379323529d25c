"""Pointwise check that ``u = pi`` is the unique, nondegenerate Hamiltonian maximizer.

Along the base trajectory the Hamiltonian is a cubic in ``y = cos u``.  The
problem is admissible when, for every ``t`` on the grid, ``y = -1`` beats
``y = 1`` and every interior critical point of the cubic, and ``H_uu(t, pi)``
stays away from zero.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .problem import ProblemSpec, Variant, hamiltonian_cubic, huu_at_pi

__all__ = ["AdmissibilityReport", "check_admissible", "boundary_scan", "TIE_TOL", "DEFAULT_GRID"]

TIE_TOL = 1e-12
DEFAULT_GRID = 2048


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of :func:`check_admissible`.

    ``min_gap`` is the smallest value over the grid of ``H(t, -1)`` minus the
    best competing value of the cubic on ``(-1, 1]``.  ``indeterminate`` is set
    when a margin is within ``TIE_TOL`` of zero; such reports are never
    admissible.
    """

    admissible: bool
    min_gap: float
    min_abs_huu: float
    worst_t: float
    grid_n: int
    indeterminate: bool = False

    @property
    def margin(self) -> float:
        return min(self.min_gap, self.min_abs_huu)

    def as_dict(self) -> dict:
        return asdict(self)


def _competitor_max(a3, a2, a1, a0):
    """Largest cubic value at ``y = 1`` or at a critical point inside ``(-1, 1)``."""
    best = a3 + a2 + a1 + a0
    # critical points solve A y^2 + B y + C = 0
    A, B, C = 3.0 * a3, 2.0 * a2, a1
    # a tiny A pushes one root to +-inf; it is discarded below
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        disc = B * B - 4.0 * A * C
        real = disc >= 0.0
        sq = np.sqrt(np.where(real, disc, 0.0))
        q = -0.5 * (B + np.where(B >= 0.0, sq, -sq))
        r1 = np.where(A != 0.0, q / A, np.nan)
        r2 = np.where(q != 0.0, C / q, np.nan)
        # A == 0: single root of B y + C
        r2 = np.where((A == 0.0) & (B != 0.0), -C / B, r2)
    for r in (r1, r2):
        ok = real & np.isfinite(r) & (r > -1.0) & (r < 1.0)
        r = np.where(ok, r, 0.0)
        val = ((a3 * r + a2) * r + a1) * r + a0
        best = np.where(ok, np.maximum(best, val), best)
    return best


def check_admissible(spec: ProblemSpec, grid_n: int = DEFAULT_GRID) -> AdmissibilityReport:
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    ts = np.linspace(0.0, spec.T, grid_n + 1)
    cubic = hamiltonian_cubic(spec, ts)
    a3, a2, a1, a0 = (np.broadcast_to(np.asarray(a, float), ts.shape) for a in
                      (cubic.a3, cubic.a2, cubic.a1, cubic.a0))
    at_pi = -a3 + a2 - a1 + a0
    gap = at_pi - _competitor_max(a3, a2, a1, a0)
    huu = np.abs(np.broadcast_to(huu_at_pi(spec, ts), ts.shape))
    i_gap = int(np.argmin(gap))
    i_huu = int(np.argmin(huu))
    min_gap, min_huu = float(gap[i_gap]), float(huu[i_huu])
    worst_t = float(ts[i_gap] if min_gap <= min_huu else ts[i_huu])
    indeterminate = abs(min_gap) <= TIE_TOL or min_huu <= TIE_TOL
    admissible = (not indeterminate) and min_gap > 0.0 and min_huu > 0.0
    return AdmissibilityReport(admissible, min_gap, min_huu, worst_t, grid_n, indeterminate)


_AXES = {
    Variant.LFUNCTIONAL: ("mu", "nu", "M"),
    Variant.SIGMA24: ("nu",),
    Variant.SIGMA34: ("mu",),
    Variant.A4BOUND: ("M",),
}


def _spec_on_axis(variant: Variant, axis: str, value: float, fixed: dict) -> ProblemSpec:
    if axis not in _AXES[variant]:
        raise ValueError(f"axis {axis!r} is not a parameter of {variant.value}")
    params = dict(fixed)
    params[axis] = value
    return ProblemSpec(variant, **params)


def boundary_scan(
    variant: Variant,
    axis: str,
    interval: tuple[float, float],
    tol: float = 1e-6,
    grid_n: int = DEFAULT_GRID,
    **fixed,
) -> float:
    """Bisect the admissible/inadmissible transition along one parameter axis."""
    lo, hi = map(float, interval)

    def ok(value):
        return check_admissible(_spec_on_axis(variant, axis, value, fixed), grid_n).admissible

    ok_lo, ok_hi = ok(lo), ok(hi)
    if ok_lo == ok_hi:
        raise ValueError(
            f"endpoints of {interval} agree in admissibility ({ok_lo}); no boundary to locate"
        )
    n_iter = max(0, math.ceil(math.log2(abs(hi - lo) / tol)))
    for _ in range(n_iter):
        mid = 0.5 * (lo + hi)
        if ok(mid) == ok_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
