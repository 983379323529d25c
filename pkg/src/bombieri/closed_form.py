"""Explicit solution of the variational system when ``nu = 0``.

With ``nu = 0`` the adjoint variation obeys ``y6 = 2 mu y4 + 1``, the control
derivative becomes ``u_p = -1 / (1 - 4 mu/M + 4 mu t)`` and everything
integrates in elementary functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "ClosedFormResult",
    "fpp_closed",
    "criterion",
    "sigma32",
    "up_closed",
    "y1_closed",
    "y4_closed",
    "MU_LIMIT_TOL",
]

MU_LIMIT_TOL = 1e-8


def _inv(M: float) -> float:
    M = float(M)
    if math.isnan(M) or M < 1.0:
        raise DomainError(f"bound M must satisfy M >= 1, got {M}")
    return 0.0 if math.isinf(M) else 1.0 / M


def _affine(mu: float, M: float, t: float) -> float:
    d = 1.0 - 4.0 * mu * _inv(M) + 4.0 * mu * t
    if not d > 0.0 or abs(d) < 1e-14:
        raise DomainError(f"1 - 4mu/M + 4mu t must stay positive (mu={mu}, M={M}, t={t})")
    return d


def up_closed(mu: float, M: float, t: float) -> float:
    _affine(mu, M, 0.0)
    return -1.0 / _affine(mu, M, t)


def y1_closed(mu: float, M: float, t: float) -> float:
    a0, at = _affine(mu, M, 0.0), _affine(mu, M, t)
    if abs(mu) < MU_LIMIT_TOL:
        return -2.0 * t
    return (1.0 / at - 1.0 / a0) / (2.0 * mu)


def y4_closed(mu: float, M: float, t: float) -> float:
    a0, at = _affine(mu, M, 0.0), _affine(mu, M, t)
    if abs(mu) < MU_LIMIT_TOL:
        return 2.0 * t
    return math.log(at / a0) / (2.0 * mu)


def fpp_closed(mu: float, M: float = math.inf) -> float:
    """``F''(0) = y1(T) + mu y2(T)`` for ``L(mu, 0)``.

    ``mu = 0`` is a removable singularity; the limit ``-2 T`` (``-2`` for
    ``M = inf``) is returned for ``|mu| < MU_LIMIT_TOL``.
    """
    m = _inv(M)
    if abs(mu) < MU_LIMIT_TOL:
        return -2.0 * (1.0 - m)
    num = 1.0 + 4.0 * mu - 8.0 * mu * m
    den = 1.0 - 4.0 * mu * m
    if not (num > 0.0 and den > 0.0):
        raise DomainError(f"logarithm argument not positive for mu={mu}, M={M}")
    lr = math.log(num / den)
    return -(lr * lr + lr) / (2.0 * mu)


@dataclass(frozen=True)
class ClosedFormResult:
    fpp: float
    criterion_lhs: float

    @property
    def pick_is_local_max(self) -> bool:
        return self.criterion_lhs > 0.0


def criterion(mu: float, M: float = math.inf) -> ClosedFormResult:
    """Local-maximality test for ``Re(a2 + mu a3)`` at the Pick function."""
    fpp = fpp_closed(mu, M)
    return ClosedFormResult(fpp=fpp, criterion_lhs=-fpp)


def sigma32() -> float:
    """``(e - 1) / (4e)``, the root of ``F''(0)`` at ``mu = -sigma32``, ``M = inf``."""
    return (math.e - 1.0) / (4.0 * math.e)
