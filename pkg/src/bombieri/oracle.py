"""Brute-force check of the variational machinery.

Integrates the full coefficient + adjoint system with the control obtained by
maximizing the Hamiltonian numerically at every right-hand-side evaluation,
then differences the resulting objective ``F(p, q)``.  Nothing here uses the
variational equations, so agreement with :mod:`bombieri.variational` is an
independent confirmation of them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import AmbiguousMaximizer, LeftBaseNeighborhood
from .integrator import IntegratorOptions, integrate
from .problem import ProblemSpec, adjoint_rhs, base_adjoint, hamiltonian_harmonics, lowner_rhs
from .variational import HessianF

__all__ = [
    "ControlSolverOptions",
    "LemmaReport",
    "optimal_control",
    "simulate_state",
    "simulate",
    "fd_hessian",
    "fd_gradient",
    "lemma_checks",
]

TWO_PI = 2.0 * math.pi
TIE_TOL = 1e-13
GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class ControlSolverOptions:
    coarse_grid: int = 64
    refine_iters: int = 30

    def __post_init__(self):
        if self.coarse_grid < 64:
            raise ValueError("coarse_grid must be >= 64")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")


@njit(cache=True)
def _h(c, u):
    return (c[0] * math.cos(u) + c[1] * math.sin(u) + c[2] * math.cos(2.0 * u)
            + c[3] * math.sin(2.0 * u) + c[4] * math.cos(3.0 * u))


@njit(cache=True)
def _maximize(c, n_grid, refine_iters, anchor):
    """Global maximizer of ``u -> H`` on ``[0, 2 pi)``.

    Returns ``(u, ambiguous)``.  Near-ties between non-adjacent grid maxima
    are resolved toward ``anchor`` and flagged.
    """
    du = TWO_PI / n_grid
    vals = np.empty(n_grid)
    for k in range(n_grid):
        vals[k] = _h(c, k * du)
    best = 0
    for k in range(1, n_grid):
        if vals[k] > vals[best]:
            best = k
    ambiguous = False
    scale = 1.0 + abs(vals[best])
    for k in range(n_grid):
        sep = abs(k - best)
        sep = min(sep, n_grid - sep)
        if sep > 1 and vals[best] - vals[k] < TIE_TOL * scale:
            # a separated local max of equal height: keep the one nearest the anchor
            is_local = vals[k] >= vals[(k - 1) % n_grid] and vals[k] >= vals[(k + 1) % n_grid]
            if is_local:
                ambiguous = True
                d_best = abs((best * du - anchor + math.pi) % TWO_PI - math.pi)
                d_k = abs((k * du - anchor + math.pi) % TWO_PI - math.pi)
                if d_k < d_best:
                    best = k
    # golden-section refinement on the neighbouring cells
    a = (best - 1) * du
    b = (best + 1) * du
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = _h(c, x1), _h(c, x2)
    for _ in range(refine_iters):
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = _h(c, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = _h(c, x2)
    u = best * du if refine_iters == 0 else 0.5 * (a + b)
    # Newton on H_u = 0 to reach machine precision
    for _ in range(8):
        s1, c1 = math.sin(u), math.cos(u)
        s2, c2 = math.sin(2.0 * u), math.cos(2.0 * u)
        s3, c3 = math.sin(3.0 * u), math.cos(3.0 * u)
        hu = -c[0] * s1 + c[1] * c1 - 2.0 * c[2] * s2 + 2.0 * c[3] * c2 - 3.0 * c[4] * s3
        huu = -c[0] * c1 - c[1] * s1 - 4.0 * c[2] * c2 - 4.0 * c[3] * s2 - 9.0 * c[4] * c3
        if huu >= 0.0:
            break
        step = hu / huu
        if abs(step) > du:
            break
        u -= step
        if abs(step) < 1e-16:
            break
    return u % TWO_PI, ambiguous


@njit(cache=True)
def _full_rhs(t, z, n_grid, refine_iters):
    c = hamiltonian_harmonics(t, z[:5], z[5:])
    u, _ = _maximize(c, n_grid, refine_iters, math.pi)
    out = np.empty(10)
    out[:5] = lowner_rhs(t, z[:5], u)
    out[5:] = adjoint_rhs(t, z[:5], z[5:], u)
    return out


def optimal_control(t: float, state, opts: ControlSolverOptions | None = None, u_prev: float | None = None) -> float:
    """Maximizer of the Hamiltonian in ``u`` for the state ``(x, psi)``.

    ``state`` is the 10-vector ``(x1..x5, psi1..psi5)``.  A near-tie between
    separated maxima is resolved toward ``u_prev`` when given, and raises
    :class:`AmbiguousMaximizer` otherwise.
    """
    opts = opts or ControlSolverOptions()
    z = np.asarray(state, dtype=float)
    c = hamiltonian_harmonics(float(t), z[:5], z[5:])
    anchor = math.pi if u_prev is None else float(u_prev)
    u, ambiguous = _maximize(c, opts.coarse_grid, opts.refine_iters, anchor)
    if ambiguous and u_prev is None:
        raise AmbiguousMaximizer(f"separated near-equal maxima of H at t={t:.6g}")
    return float(u)


def _initial(spec: ProblemSpec, xi) -> np.ndarray:
    z = np.zeros(10)
    z[5:] = base_adjoint(spec, 0.0) + np.asarray(xi, dtype=float)
    return z


def simulate_state(
    spec: ProblemSpec,
    xi,
    integ: IntegratorOptions | None = None,
    opts: ControlSolverOptions | None = None,
    monitor: bool = True,
) -> np.ndarray:
    """Final ``(x, psi)`` at ``T`` starting from ``psi(0) = psi0(0) + xi``.

    With ``monitor`` the control is recomputed along the stored trajectory;
    a jump of more than ``pi/2`` between steps, or a control more than
    ``pi/2`` away from ``pi``, raises :class:`LeftBaseNeighborhood`.
    """
    integ = integ or IntegratorOptions()
    opts = opts or ControlSolverOptions()
    z0 = _initial(spec, xi)
    run = IntegratorOptions(integ.method, integ.steps, record_trajectory=monitor)
    out = integrate(_full_rhs, z0, 0.0, spec.T, run, args=(opts.coarse_grid, opts.refine_iters))
    if not monitor:
        return out
    ts, zs = out
    u_prev = math.pi
    for t, z in zip(ts, zs):
        u = optimal_control(t, z, opts, u_prev)
        if abs(u - u_prev) > 0.5 * math.pi or abs(u - math.pi) > 0.5 * math.pi:
            raise LeftBaseNeighborhood(f"control jumped to {u:.6g} at t={t:.6g}")
        u_prev = u
    return zs[-1].copy()


def simulate(
    spec: ProblemSpec,
    p: float,
    q: float,
    integ: IntegratorOptions | None = None,
    opts: ControlSolverOptions | None = None,
    monitor: bool = True,
) -> float:
    """``F(p, q)``: the objective at ``T`` after perturbing ``psi2(0)``, ``psi4(0)``."""
    z = simulate_state(spec, (0.0, p, 0.0, q, 0.0), integ, opts, monitor)
    return float(spec.objective(z[:5]))


def _stencil(F, F0, h):
    fpp = (F(h, 0.0) - 2.0 * F0 + F(-h, 0.0)) / h**2
    fqq = (F(0.0, h) - 2.0 * F0 + F(0.0, -h)) / h**2
    fpq = (F(h, h) - F(h, -h) - F(-h, h) + F(-h, -h)) / (4.0 * h**2)
    return np.array([fpp, fqq, fpq])


def fd_hessian(
    spec: ProblemSpec,
    h: float = 1e-3,
    integ: IntegratorOptions | None = None,
    opts: ControlSolverOptions | None = None,
    richardson: bool = True,
    monitor: bool = False,
) -> HessianF:
    """Central-difference Hessian of ``F`` at the origin.

    With ``richardson`` the stencils at ``h`` and ``h/2`` are combined to
    cancel the ``O(h^2)`` error term.
    """
    if not 1e-4 <= h <= 1e-2:
        raise ValueError(f"h must lie in [1e-4, 1e-2], got {h}")

    def F(p, q):
        return simulate(spec, p, q, integ, opts, monitor)

    F0 = F(0.0, 0.0)
    d = _stencil(F, F0, h)
    if richardson:
        d = (4.0 * _stencil(F, F0, 0.5 * h) - d) / 3.0
    return HessianF(fpp=float(d[0]), fqq=float(d[1]), fpq=float(d[2]))


def fd_gradient(
    spec: ProblemSpec,
    h: float = 1e-3,
    integ: IntegratorOptions | None = None,
    opts: ControlSolverOptions | None = None,
) -> tuple[float, float]:
    """Central-difference gradient ``(F_p, F_q)`` at the origin."""
    fp = (simulate(spec, h, 0.0, integ, opts) - simulate(spec, -h, 0.0, integ, opts)) / (2 * h)
    fq = (simulate(spec, 0.0, h, integ, opts) - simulate(spec, 0.0, -h, integ, opts)) / (2 * h)
    return fp, fq


@dataclass(frozen=True)
class LemmaReport:
    """Response of ``x(T)`` to the adjoint perturbation ``eps * e``.

    ``orthogonality`` is ``psi0(T) . dx / |dx|`` with
    ``dx = (x(T; eps e) - x0(T)) / eps`` (NaN when ``dx`` vanishes);
    ``displacement`` is ``|x(T; eps e) - x0(T)|``.
    """

    orthogonality: float
    displacement: float
    delta_x: tuple


def lemma_checks(
    spec: ProblemSpec,
    e,
    eps: float,
    integ: IntegratorOptions | None = None,
    opts: ControlSolverOptions | None = None,
) -> LemmaReport:
    e = np.asarray(e, dtype=float)
    if e.shape != (5,) or not math.isclose(float(np.linalg.norm(e)), 1.0, rel_tol=1e-12):
        raise ValueError("e must be a unit 5-vector")
    x0 = simulate_state(spec, np.zeros(5), integ, opts)[:5]
    x = simulate_state(spec, eps * e, integ, opts)[:5]
    dx = (x - x0) / eps
    norm = float(np.linalg.norm(dx))
    psi_T = spec.terminal_adjoint()
    orth = float(psi_T @ dx) / norm if norm > 0.0 else math.nan
    return LemmaReport(orthogonality=orth, displacement=float(np.linalg.norm(x - x0)), delta_x=tuple(dx))
