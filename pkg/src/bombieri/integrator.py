"""Fixed-step explicit integrators: classical RK4 and ABM4 (PECE, RK4 start).

``integrate`` accepts any ``rhs(t, y, *args) -> ndarray``.  When ``rhs`` is a
numba-compiled function the stepping loop is compiled as well; the source of
the loop is shared, so both paths perform the same arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from numba.extending import is_jitted

from .errors import IntegrationError, NumericalError

__all__ = ["IntegratorOptions", "integrate", "order_estimate", "METHODS"]

METHODS = ("rk4", "abm4")


@dataclass(frozen=True)
class IntegratorOptions:
    method: str = "rk4"
    steps: int = 20000
    record_trajectory: bool = False

    def __post_init__(self):
        method = self.method.lower()
        if method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        object.__setattr__(self, "method", method)
        min_steps = 4 if method == "abm4" else 1
        if int(self.steps) != self.steps or self.steps < min_steps:
            raise ValueError(f"{method} needs an integer steps >= {min_steps}, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))

    def with_steps(self, steps: int) -> "IntegratorOptions":
        return IntegratorOptions(self.method, steps, self.record_trajectory)


def _rk4_loop(rhs, y0, t0, h, n, args, record):
    y = y0.copy()
    ys = np.empty((n + 1 if record else 1, y0.shape[0]))
    ys[0] = y
    for i in range(n):
        t = t0 + i * h
        k1 = rhs(t, y, *args)
        k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1, *args)
        k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2, *args)
        k4 = rhs(t + h, y + h * k3, *args)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if record:
            ys[i + 1] = y
    if not record:
        ys[0] = y
    return ys


def _abm4_loop(rhs, y0, t0, h, n, args, record):
    dim = y0.shape[0]
    y = y0.copy()
    ys = np.empty((n + 1 if record else 1, dim))
    ys[0] = y
    # f[0] is the newest derivative, f[3] the oldest
    f = np.empty((4, dim))
    f[3] = rhs(t0, y, *args)
    for i in range(3):
        t = t0 + i * h
        k1 = f[3 - i]
        k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1, *args)
        k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2, *args)
        k4 = rhs(t + h, y + h * k3, *args)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        f[2 - i] = rhs(t + h, y, *args)
        if record:
            ys[i + 1] = y
    for i in range(3, n):
        t1 = t0 + (i + 1) * h
        yp = y + (h / 24.0) * (55.0 * f[0] - 59.0 * f[1] + 37.0 * f[2] - 9.0 * f[3])
        fp = rhs(t1, yp, *args)
        y = y + (h / 24.0) * (9.0 * fp + 19.0 * f[0] - 5.0 * f[1] + f[2])
        f[3] = f[2]
        f[2] = f[1]
        f[1] = f[0]
        f[0] = rhs(t1, y, *args)
        if record:
            ys[i + 1] = y
    if not record:
        ys[0] = y
    return ys


_LOOPS = {"rk4": _rk4_loop, "abm4": _abm4_loop}
_JIT_LOOPS = {name: njit(cache=False, nogil=True)(fn) for name, fn in _LOOPS.items()}


class _Traced:
    """Wraps a Python rhs to remember the time of the last call."""

    def __init__(self, rhs):
        self.rhs = rhs
        self.t = math.nan

    def __call__(self, t, y, *args):
        self.t = t
        return np.asarray(self.rhs(t, y, *args), dtype=float)


def integrate(rhs, y0, t0: float, t1: float, opts: IntegratorOptions | None = None, args: tuple = ()):
    """Integrate ``y' = rhs(t, y, *args)`` from ``t0`` to ``t1``.

    Returns the state at ``t1``, or ``(ts, ys)`` when
    ``opts.record_trajectory`` is set.
    """
    opts = opts or IntegratorOptions()
    if not t1 >= t0:
        raise ValueError(f"need t1 >= t0, got [{t0}, {t1}]")
    y0 = np.array(y0, dtype=float, ndmin=1)
    n = opts.steps
    h = (t1 - t0) / n
    record = opts.record_trajectory
    if is_jitted(rhs):
        ys = _JIT_LOOPS[opts.method](rhs, y0, float(t0), h, n, tuple(args), record)
    else:
        traced = _Traced(rhs)
        try:
            ys = _LOOPS[opts.method](traced, y0, float(t0), h, n, tuple(args), record)
        except NumericalError as exc:
            if isinstance(exc, IntegrationError):
                raise
            raise IntegrationError(traced.t, exc) from exc
        except (ArithmeticError, ValueError) as exc:
            raise IntegrationError(traced.t, exc) from exc
    if not np.all(np.isfinite(ys[-1])):
        raise NumericalError(f"non-finite state reached integrating on [{t0}, {t1}]")
    if record:
        return t0 + h * np.arange(n + 1), ys
    return ys[0].copy()


def order_estimate(rhs, y0, t0: float, t1: float, steps: int, method: str = "rk4", args: tuple = ()) -> float:
    """Empirical convergence order from runs with ``steps``, ``2 steps``, ``4 steps``."""
    sols = [
        integrate(rhs, y0, t0, t1, IntegratorOptions(method, steps * k), args)
        for k in (1, 2, 4)
    ]
    e1 = np.max(np.abs(sols[0] - sols[1]))
    e2 = np.max(np.abs(sols[1] - sols[2]))
    return float(np.log2(e1 / e2))
