"""Second-variation ODEs along the base trajectory and the Hessian of F.

State layout (``y[0]`` is y1)::

    y1..y3    (x1, x3, x5)_pp        y7..y9    (x1, x3, x5)_qq
    y4, y5    (x2, x4)_p             y10, y11  (x2, x4)_q
    y6        (psi2)_p               y12       (psi2)_q
    y13..y15  (x1, x3, x5)_pq

All four problems share one right-hand side.  They differ only in a handful of
coefficients, collected in :class:`VariationalCoeffs`:

* ``c(t) = c0 + c1 t`` and ``d`` in the numerators of ``u_p``, ``u_q``,
* ``Delta(t) = q2 t^2 + q1 t + q0 = -H_uu(t, pi) / 2``, their denominator,
* ``e(t) = e0 + e1 t`` in the adjoint variation ``y6' = -4 e u_p - 4 d y4``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DenominatorVanishing
from .integrator import IntegratorOptions, integrate
from .problem import ProblemSpec, Variant

__all__ = [
    "VariationalCoeffs",
    "ControlDerivs",
    "HessianF",
    "variational_coeffs",
    "initial_state",
    "control_derivs",
    "rhs",
    "check_denominator",
    "solve_variational",
    "hessian_of_F",
    "first_order_rhs",
    "DENOM_TOL",
]

DENOM_TOL = 1e-12
N_STATE = 15


@dataclass(frozen=True)
class VariationalCoeffs:
    c0: float
    c1: float
    d: float
    q2: float
    q1: float
    q0: float
    e0: float
    e1: float

    def packed(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.d, self.q2, self.q1, self.q0, self.e0, self.e1])

    def delta(self, t):
        return (self.q2 * t + self.q1) * t + self.q0


def variational_coeffs(spec: ProblemSpec) -> VariationalCoeffs:
    v, mu, nu, m = spec.variant, spec.mu, spec.nu, spec.inv_M
    if v is Variant.LFUNCTIONAL:
        return VariationalCoeffs(
            c0=(3 - 4 * m) * nu + mu,
            c1=-5 * nu,
            d=nu,
            q2=16 * nu,
            q1=-4 * (2 * nu + 4 * nu * m - mu),
            q0=2 * nu + 1 - 4 * (2 * nu + mu) * m + 15 * nu * m**2,
            e0=nu * (1 - 4 * m) + mu,
            e1=nu,
        )
    if v is Variant.SIGMA24:
        return VariationalCoeffs(3.0, -5.0, 1.0, 16.0, -8.0, nu + 2, 1.0, 1.0)
    if v is Variant.SIGMA34:
        return VariationalCoeffs(3 + mu, -5.0, 1.0, 16.0, -(8 - 4 * mu), 2.0, 1 + mu, 1.0)
    return VariationalCoeffs(
        c0=3 - 4 * m,
        c1=-5.0,
        d=1.0,
        q2=16.0,
        q1=-(8 + 16 * m),
        q0=2 - 8 * m + 15 * m**2,
        e0=1 - 4 * m,
        e1=1.0,
    )


def initial_state() -> np.ndarray:
    y = np.zeros(N_STATE)
    y[5] = 1.0  # (psi2)_p(0) = 1
    return y


@dataclass(frozen=True)
class ControlDerivs:
    up: float
    uq: float


@dataclass(frozen=True)
class HessianF:
    """Hessian of ``F(p, q)`` at the origin."""

    fpp: float
    fqq: float
    fpq: float

    @property
    def det(self) -> float:
        return self.fpp * self.fqq - self.fpq**2

    def as_dict(self) -> dict:
        return {"fpp": self.fpp, "fqq": self.fqq, "fpq": self.fpq, "det": self.det}


@njit(cache=True)
def _controls(t, y, k):
    c = k[0] + k[1] * t
    d = k[2]
    delta = (k[3] * t + k[4]) * t + k[5]
    up = (c * 2.0 * y[3] + 2.0 * d * y[4] - y[5]) / delta
    uq = (c * 2.0 * y[9] + 2.0 * d * y[10] - y[11] + 2.0 * (1.0 - 3.0 * t)) / delta
    return up, uq


@njit(cache=True)
def _rhs_kernel(t, y, k):
    up, uq = _controls(t, y, k)
    d = k[2]
    e = k[6] + k[7] * t
    a = 2.0 * (7.0 * t - 3.0)
    b = 5.0 * t - 3.0
    w = 2.0 * (47.0 * t * t - 46.0 * t + 9.0)
    g = 2.0 * t - 1.0
    y1, y2, y4, y5 = y[0], y[1], y[3], y[4]
    y7, y8, y10, y11 = y[6], y[7], y[9], y[10]
    y13, y14 = y[12], y[13]
    out = np.empty(15)
    out[0] = -2.0 * up * up
    out[1] = 4.0 * (y1 + 2.0 * y4 * up - 2.0 * g * up * up)
    out[2] = a * y1 + 4.0 * y2 - 4.0 * y4 * y4 + 8.0 * b * y4 * up + 8.0 * y5 * up - w * up * up
    out[3] = -2.0 * up
    out[4] = 4.0 * (y4 + (1.0 - 3.0 * t) * up)
    out[5] = -4.0 * e * up - 4.0 * d * y4
    out[6] = -2.0 * uq * uq
    out[7] = 4.0 * (y7 + 2.0 * y10 * uq - 2.0 * g * uq * uq)
    out[8] = a * y7 + 4.0 * y8 - 4.0 * y10 * y10 + 8.0 * b * y10 * uq + 8.0 * y11 * uq - w * uq * uq
    out[9] = -2.0 * uq
    out[10] = 4.0 * (y10 + (1.0 - 3.0 * t) * uq)
    out[11] = -4.0 * e * uq - 4.0 * d * y10 - 4.0
    out[12] = -2.0 * up * uq
    out[13] = 4.0 * (y13 + y4 * uq + y10 * up) - 8.0 * g * up * uq
    out[14] = (
        a * y13
        + 4.0 * y14
        - 4.0 * y4 * y10
        + 4.0 * b * (y4 * uq + y10 * up)
        + 4.0 * y5 * uq
        + 4.0 * y11 * up
        - w * up * uq
    )
    return out


@njit(cache=True)
def first_order_rhs(t, z, k):
    """The closed p-subsystem ``(y4, y5, y6)``; it does not involve y1..y3."""
    c = k[0] + k[1] * t
    d = k[2]
    delta = (k[3] * t + k[4]) * t + k[5]
    up = (c * 2.0 * z[0] + 2.0 * d * z[1] - z[2]) / delta
    e = k[6] + k[7] * t
    out = np.empty(3)
    out[0] = -2.0 * up
    out[1] = 4.0 * (z[0] + (1.0 - 3.0 * t) * up)
    out[2] = -4.0 * e * up - 4.0 * d * z[0]
    return out


def check_denominator(spec: ProblemSpec, coeffs: VariationalCoeffs | None = None) -> tuple[float, float]:
    """Return ``(t, Delta(t))`` at the smallest ``|Delta|`` on ``[0, T]``.

    Raises :class:`DenominatorVanishing` if ``Delta`` has a zero on the
    interval or comes within ``DENOM_TOL`` of one.
    """
    k = coeffs or variational_coeffs(spec)
    T = spec.T
    candidates = [0.0, T]
    if k.q2 != 0.0:
        tv = -k.q1 / (2 * k.q2)
        if 0.0 < tv < T:
            candidates.append(tv)
    vals = [k.delta(t) for t in candidates]
    i = int(np.argmin(np.abs(vals)))
    t_min, v_min = candidates[i], vals[i]
    if abs(v_min) < DENOM_TOL:
        raise DenominatorVanishing(t_min, v_min)
    if min(vals) < 0.0 < max(vals):
        roots = np.roots([k.q2, k.q1, k.q0]) if k.q2 != 0.0 else np.array([-k.q0 / k.q1])
        inside = [r.real for r in np.atleast_1d(roots) if abs(r.imag) < 1e-14 and 0.0 <= r.real <= T]
        t_zero = inside[0] if inside else t_min
        raise DenominatorVanishing(t_zero, 0.0)
    return t_min, v_min


def control_derivs(spec: ProblemSpec, t: float, y) -> ControlDerivs:
    """``u_p`` and ``u_q`` from the implicit-function relation at ``u = pi``."""
    k = variational_coeffs(spec)
    delta = k.delta(t)
    if abs(delta) < DENOM_TOL:
        raise DenominatorVanishing(t, delta)
    up, uq = _controls(float(t), np.asarray(y, dtype=float), k.packed())
    return ControlDerivs(float(up), float(uq))


def rhs(spec: ProblemSpec, t: float, y) -> np.ndarray:
    """Time derivative of the 15-component variational state."""
    k = variational_coeffs(spec)
    delta = k.delta(t)
    if abs(delta) < DENOM_TOL:
        raise DenominatorVanishing(t, delta)
    return _rhs_kernel(float(t), np.asarray(y, dtype=float), k.packed())


def solve_variational(spec: ProblemSpec, integ: IntegratorOptions | None = None):
    """Integrate the variational system over ``[0, T]``.

    Returns the final state, or ``(ts, ys)`` if the options ask for the
    trajectory.
    """
    k = variational_coeffs(spec)
    check_denominator(spec, k)
    return integrate(_rhs_kernel, initial_state(), 0.0, spec.T, integ, args=(k.packed(),))


def hessian_of_F(spec: ProblemSpec, integ: IntegratorOptions | None = None) -> HessianF:
    """Entries ``F_pp, F_qq, F_pq`` at the origin."""
    integ = integ or IntegratorOptions()
    if integ.record_trajectory:
        integ = IntegratorOptions(integ.method, integ.steps)
    y = solve_variational(spec, integ)
    w = np.array(spec.weights)
    return HessianF(
        fpp=float(w @ y[0:3]),
        fqq=float(w @ y[6:9]),
        fpq=float(w @ y[12:15]),
    )
