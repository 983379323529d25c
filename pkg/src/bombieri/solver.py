"""Locate the extremal constants from the second-order conditions.

Each constant is a one-parameter problem: along a parameter axis the Pick
function stops being a strict local maximizer where ``F_pp`` (the first
minor, ``g1``) or ``det`` (``g2``) changes sign.  The solver scans the axis,
brackets every sign change of either function, bisects, and picks the root
closest to the base point (``0`` for the Bombieri numbers, the largest ``M``
for the Tammi constant).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .admissibility import DEFAULT_GRID, check_admissible
from .errors import BracketOnBoundary, DenominatorVanishing, NoSignChange, NumericalError
from .integrator import IntegratorOptions
from .problem import ProblemSpec, Variant
from .variational import hessian_of_F

__all__ = [
    "Problem",
    "PROBLEMS",
    "RootScanConfig",
    "SolverResult",
    "get_problem",
    "g1",
    "g2",
    "scan",
    "solve",
]

BOUNDARY_TOL = 1e-9
STEP_HALVING_TOL = 1e-10
EQUATIONS = ("first_minor", "determinant")


@dataclass(frozen=True)
class Problem:
    """A one-parameter family of extremal problems.

    ``negate`` marks Bombieri numbers, which are minus the root closest to
    zero; otherwise the largest root is reported.
    """

    name: str
    variant: Variant
    axis: str
    interval: tuple[float, float]
    fixed: dict = field(default_factory=dict)
    negate: bool = True
    equations: tuple[str, ...] = EQUATIONS
    geometric: bool = False

    def spec(self, value: float) -> ProblemSpec:
        return ProblemSpec(self.variant, **{**self.fixed, self.axis: value})


PROBLEMS = {
    p.name: p
    for p in (
        Problem("sigma32", Variant.LFUNCTIONAL, "mu", (-0.25, 0.0), {"nu": 0.0, "M": math.inf},
                equations=("first_minor",)),
        Problem("sigma42", Variant.LFUNCTIONAL, "nu", (-0.1, 0.0), {"mu": 0.0, "M": math.inf}),
        Problem("sigma24", Variant.SIGMA24, "nu", (-1.0, 0.0)),
        Problem("sigma34", Variant.SIGMA34, "mu", (-2.0 * (math.sqrt(2.0) - 1.0), 0.0)),
        Problem("m0", Variant.A4BOUND, "M", (11.0, 300.0), negate=False, geometric=True),
    )
}


def get_problem(problem: str | Problem) -> Problem:
    if isinstance(problem, Problem):
        return problem
    try:
        return PROBLEMS[problem.lower()]
    except KeyError:
        raise ValueError(f"unknown problem {problem!r}; choose from {sorted(PROBLEMS)}") from None


@dataclass(frozen=True)
class RootScanConfig:
    scan_interval: tuple[float, float] | None = None
    scan_points: int = 200
    bisect_tol: float = 1e-7
    integ: IntegratorOptions = field(default_factory=IntegratorOptions)

    def __post_init__(self):
        if self.scan_points < 2:
            raise ValueError("scan_points must be >= 2")
        if not self.bisect_tol > 0:
            raise ValueError("bisect_tol must be positive")


@dataclass(frozen=True)
class SolverResult:
    problem: str
    value: float
    attained_by: str
    root_param: float
    bracket: tuple[float, float]
    g_values_at_bracket: tuple[float, float]
    admissibility_margin: float
    roots: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LOEWNER_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _g(problem: Problem, param: float, integ, which: str) -> float:
    h = hessian_of_F(problem.spec(param), integ)
    return h.fpp if which == "first_minor" else h.det


def g1(problem: str | Problem, param: float, integ: IntegratorOptions | None = None) -> float:
    """``F_pp`` at the origin for the problem at parameter ``param``."""
    return _g(get_problem(problem), param, integ, "first_minor")


def g2(problem: str | Problem, param: float, integ: IntegratorOptions | None = None) -> float:
    """``F_pp F_qq - F_pq^2`` at the origin."""
    return _g(get_problem(problem), param, integ, "determinant")


def scan_grid(problem: Problem, interval: tuple[float, float], n: int) -> np.ndarray:
    """``n`` interior points of the open interval, increasing."""
    lo, hi = interval
    if problem.geometric:
        return np.geomspace(lo, hi, n + 2)[1:-1]
    return np.linspace(lo, hi, n + 2)[1:-1]


def scan(problem: str | Problem, cfg: RootScanConfig | None = None, with_margin: bool = False):
    """Evaluate both conditions on the scan grid.

    Returns rows ``(param, g1, g2, margin)``; a condition that cannot be
    evaluated (vanishing denominator) is NaN.  ``margin`` is only computed
    when ``with_margin`` is set, otherwise it is NaN.
    """
    problem = get_problem(problem)
    cfg = cfg or RootScanConfig()
    grid = scan_grid(problem, cfg.scan_interval or problem.interval, cfg.scan_points)

    def row(param):
        spec = problem.spec(float(param))
        try:
            h = hessian_of_F(spec, cfg.integ)
            vals = (h.fpp, h.det)
        except DenominatorVanishing:
            vals = (math.nan, math.nan)
        margin = check_admissible(spec, DEFAULT_GRID).margin if with_margin else math.nan
        return (float(param), vals[0], vals[1], margin)

    return _map(row, grid)


def _bisect(f, lo: float, hi: float, f_lo: float, f_hi: float, tol: float):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid, mid, f_mid, f_mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo, hi, f_lo, f_hi


def _check_step_halving(problem: Problem, root: float, eq: str, integ: IntegratorOptions):
    """Refuse a root whose condition value moves when the step is halved.

    The change is measured against the size of the terms that cancel in the
    condition (``|F_pp|``, or ``|F_pp F_qq| + F_pq^2`` for the determinant).
    """
    spec = problem.spec(root)
    coarse = hessian_of_F(spec, integ)
    fine = hessian_of_F(spec, integ.with_steps(2 * integ.steps))
    if eq == "first_minor":
        change, scale = abs(fine.fpp - coarse.fpp), abs(fine.fpp)
    else:
        change, scale = abs(fine.det - coarse.det), abs(fine.fpp * fine.fqq) + fine.fpq**2
    if change > STEP_HALVING_TOL * max(1.0, scale):
        raise NumericalError(
            f"{problem.name}: {eq} changes by {change:.3e} under step halving at {root:.12g}; "
            "increase the integrator steps"
        )


def solve(problem: str | Problem, cfg: RootScanConfig | None = None) -> SolverResult:
    """Find the extremal constant for ``problem``."""
    problem = get_problem(problem)
    cfg = cfg or RootScanConfig()
    rows = np.array(scan(problem, cfg), dtype=float)
    params = rows[:, 0]
    found = []  # (root, equation, bracket, g values at bracket)
    for col, eq in ((1, "first_minor"), (2, "determinant")):
        if eq not in problem.equations:
            continue
        vals = rows[:, col]
        for i in range(len(params) - 1):
            a, b = vals[i], vals[i + 1]
            if not (np.isfinite(a) and np.isfinite(b)) or (a < 0.0) == (b < 0.0):
                continue
            lo, hi, f_lo, f_hi = _bisect(
                lambda x, eq=eq: _g(problem, x, cfg.integ, eq),
                params[i], params[i + 1], a, b, cfg.bisect_tol,
            )
            found.append((0.5 * (lo + hi), eq, (lo, hi), (f_lo, f_hi)))
    if problem.negate:
        found = [r for r in found if r[0] < 0.0]
    if not found:
        raise NoSignChange(f"{problem.name}: no sign change of {problem.equations} on the scan grid")
    root, eq, bracket, gvals = max(found, key=lambda r: r[0])
    margins = [check_admissible(problem.spec(x), DEFAULT_GRID) for x in bracket]
    margin = min(r.margin for r in margins)
    if not all(r.admissible for r in margins) or margin < BOUNDARY_TOL:
        raise BracketOnBoundary(
            f"{problem.name}: bracket {bracket} touches the admissible-domain boundary (margin {margin:.3e})"
        )
    _check_step_halving(problem, root, eq, cfg.integ)
    roots = {e: sorted(r[0] for r in found if r[1] == e) for e in problem.equations}
    return SolverResult(
        problem=problem.name,
        value=-root if problem.negate else root,
        attained_by=eq,
        root_param=root,
        bracket=(float(bracket[0]), float(bracket[1])),
        g_values_at_bracket=(float(gvals[0]), float(gvals[1])),
        admissibility_margin=float(margin),
        roots=roots,
    )
