"""Coefficient dynamics of the Löwner chain and the Pick/Koebe base trajectory.

The real coefficient state ``x = (Re a2, Im a2, Re a3, Im a3, Re a4)`` evolves
under the control ``u(t)``; ``psi`` is the matching adjoint (costate) vector.
Everything here is a pure function of its arguments.

The right-hand sides and the Hamiltonian are compiled with numba so that the
brute-force oracle can call them from inside its integration loop; they are
ordinary callables from Python as well.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError

__all__ = [
    "Variant",
    "ProblemSpec",
    "CubicHamiltonian",
    "base_state",
    "base_adjoint",
    "pick_coefficients",
    "hamiltonian",
    "hamiltonian_harmonics",
    "hamiltonian_cubic",
    "huu_at_pi",
    "lowner_rhs",
    "adjoint_rhs",
]


class Variant(enum.Enum):
    """Which extremal problem is posed at the Pick function."""

    LFUNCTIONAL = "L"  # Re(a2 + mu a3 + nu a4) on S^M
    SIGMA24 = "sigma24"  # Re(a4 + nu a2) on S
    SIGMA34 = "sigma34"  # Re(a4 + mu a3) on S
    A4BOUND = "m0"  # Re a4 on S^M

    @classmethod
    def parse(cls, text: str) -> "Variant":
        key = text.strip().lower()
        aliases = {
            "l": cls.LFUNCTIONAL,
            "lfunctional": cls.LFUNCTIONAL,
            "sigma42": cls.LFUNCTIONAL,
            "sigma24": cls.SIGMA24,
            "24": cls.SIGMA24,
            "sigma34": cls.SIGMA34,
            "34": cls.SIGMA34,
            "m0": cls.A4BOUND,
            "a4": cls.A4BOUND,
            "a4bound": cls.A4BOUND,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown variant {text!r}") from None


@dataclass(frozen=True)
class ProblemSpec:
    """An extremal problem together with its parameters.

    Parameters not used by a variant are normalised to the values the
    variant implies (``M = inf`` for the Bombieri problems, ``mu = nu = 0``
    where they do not appear), so equal problems compare equal.
    """

    variant: Variant
    mu: float = 0.0
    nu: float = 0.0
    M: float = math.inf

    def __post_init__(self):
        v = self.variant
        M = float(self.M)
        if math.isnan(M) or M < 1.0:
            raise DomainError(f"bound M must satisfy M >= 1, got {self.M}")
        if v in (Variant.SIGMA24, Variant.SIGMA34):
            M = math.inf
        mu = float(self.mu) if v in (Variant.LFUNCTIONAL, Variant.SIGMA34) else 0.0
        nu = float(self.nu) if v in (Variant.LFUNCTIONAL, Variant.SIGMA24) else 0.0
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def linear(cls, mu: float = 0.0, nu: float = 0.0, M: float = math.inf) -> "ProblemSpec":
        return cls(Variant.LFUNCTIONAL, mu=mu, nu=nu, M=M)

    @classmethod
    def sigma24(cls, nu: float) -> "ProblemSpec":
        return cls(Variant.SIGMA24, nu=nu)

    @classmethod
    def sigma34(cls, mu: float) -> "ProblemSpec":
        return cls(Variant.SIGMA34, mu=mu)

    @classmethod
    def a4_bound(cls, M: float) -> "ProblemSpec":
        return cls(Variant.A4BOUND, M=M)

    @property
    def inv_M(self) -> float:
        return 0.0 if math.isinf(self.M) else 1.0 / self.M

    @property
    def T(self) -> float:
        """Time horizon ``1 - 1/M``."""
        return 1.0 - self.inv_M

    @property
    def weights(self) -> tuple[float, float, float]:
        """Objective weights on ``(x1, x3, x5)``, i.e. on (Re a2, Re a3, Re a4)."""
        v = self.variant
        if v is Variant.LFUNCTIONAL:
            return (1.0, self.mu, self.nu)
        if v is Variant.SIGMA24:
            return (self.nu, 0.0, 1.0)
        if v is Variant.SIGMA34:
            return (0.0, self.mu, 1.0)
        return (0.0, 0.0, 1.0)

    def terminal_adjoint(self) -> np.ndarray:
        """Transversality values of the adjoint at ``t = T``."""
        w1, w3, w5 = self.weights
        return np.array([w1, 0.0, w3, 0.0, w5])

    def objective(self, x) -> float:
        """Weighted objective of a coefficient state at ``t = T``."""
        w1, w3, w5 = self.weights
        return w1 * x[0] + w3 * x[2] + w5 * x[4]

    def as_dict(self) -> dict:
        return {"variant": self.variant.value, "mu": self.mu, "nu": self.nu, "M": self.M}


def _check_time(t, upper: float, name: str = "t"):
    arr = np.asarray(t, dtype=float)
    tol = 1e-14
    if np.any(arr < -tol) or np.any(arr > upper + tol) or np.any(np.isnan(arr)):
        raise DomainError(f"{name} must lie in [0, {upper}], got {t}")
    return arr


def base_state(t):
    """Coefficient state along the control ``u = pi`` (the Pick/Koebe path).

    ``t`` may be a scalar or an array; the result has shape ``(5,) + shape(t)``.
    """
    t = _check_time(t, 1.0)
    z = np.zeros_like(t)
    return np.array([2 * t, z, 5 * t**2 - 2 * t, z, 14 * t**3 - 12 * t**2 + 2 * t])


def base_adjoint(spec: ProblemSpec, t):
    """Closed-form adjoint along the base trajectory for each variant."""
    t = _check_time(t, spec.T)
    z = np.zeros_like(t)
    one = np.ones_like(t)
    v, mu, nu, m = spec.variant, spec.mu, spec.nu, spec.inv_M
    if v is Variant.LFUNCTIONAL:
        s = t - 1 + m
        p1 = nu * s**2 + (14 * nu * m - 8 * nu - 4 * mu) * s + 1
        p3 = -4 * nu * s + mu
        p5 = nu * one
    elif v is Variant.SIGMA24:
        p1 = t**2 - 10 * t + 9 + nu
        p3 = -4 * (t - 1)
        p5 = one
    elif v is Variant.SIGMA34:
        p1 = t**2 - (10 + 4 * mu) * t + 9 + 4 * mu
        p3 = -4 * (t - 1) + mu
        p5 = one
    else:
        p1 = t**2 - (10 - 16 * m) * t + 9 - 24 * m + 15 * m**2
        p3 = -4 * (t - 1 + m)
        p5 = one
    return np.array([p1, z, p3, z, p5])


def pick_coefficients(M: float) -> tuple[float, float, float]:
    """Real coefficients ``(p2, p3, p4)`` of the Pick function ``P_M``."""
    M = float(M)
    if math.isnan(M) or M < 1.0:
        raise DomainError(f"bound M must satisfy M >= 1, got {M}")
    T = 1.0 if math.isinf(M) else 1.0 - 1.0 / M
    x = base_state(T)
    return float(x[0]), float(x[2]), float(x[4])


@njit(cache=True)
def lowner_rhs(t, x, u):
    """Right-hand side of the coefficient system for control ``u``."""
    x1, x2, x3, x4 = x[0], x[1], x[2], x[3]
    c, s = math.cos(u), math.sin(u)
    c2, s2, c3 = math.cos(2 * u), math.sin(2 * u), math.cos(3 * u)
    tm = t - 1.0
    out = np.empty(5)
    out[0] = -2.0 * c
    out[1] = 2.0 * s
    out[2] = -4.0 * (x1 * c + x2 * s) + 2.0 * tm * c2
    out[3] = 4.0 * (x1 * s - x2 * c) - 2.0 * tm * s2
    out[4] = (
        -2.0 * ((2.0 * x3 + x1 * x1 - x2 * x2) * c + 2.0 * (x4 + x1 * x2) * s)
        + 6.0 * tm * (x1 * c2 + x2 * s2)
        - 2.0 * tm * tm * c3
    )
    return out


@njit(cache=True)
def adjoint_rhs(t, x, psi, u):
    """Right-hand side of the adjoint system, ``-dH/dx``."""
    x1, x2 = x[0], x[1]
    p3, p4, p5 = psi[2], psi[3], psi[4]
    c, s = math.cos(u), math.sin(u)
    c2, s2 = math.cos(2 * u), math.sin(2 * u)
    tm = t - 1.0
    out = np.empty(5)
    out[0] = 4.0 * c * p3 - 4.0 * s * p4 + (4.0 * x1 * c + 4.0 * x2 * s - 6.0 * tm * c2) * p5
    out[1] = 4.0 * s * p3 + 4.0 * c * p4 - (4.0 * x2 * c - 4.0 * x1 * s + 6.0 * tm * s2) * p5
    out[2] = 4.0 * c * p5
    out[3] = 4.0 * s * p5
    out[4] = 0.0
    return out


@njit(cache=True)
def hamiltonian(t, x, psi, u):
    """The Hamiltonian, evaluated term by term as written."""
    x1, x2, x3, x4 = x[0], x[1], x[2], x[3]
    p1, p2, p3, p4, p5 = psi[0], psi[1], psi[2], psi[3], psi[4]
    c, s = math.cos(u), math.sin(u)
    c2, s2, c3 = math.cos(2 * u), math.sin(2 * u), math.cos(3 * u)
    tm = t - 1.0
    return (
        -2.0 * c * p1
        + 2.0 * s * p2
        - (4.0 * (x1 * c + x2 * s) - 2.0 * tm * c2) * p3
        + (4.0 * (x1 * s - x2 * c) - 2.0 * tm * s2) * p4
        - (
            2.0 * ((2.0 * x3 + x1 * x1 - x2 * x2) * c + 2.0 * (x4 + x1 * x2) * s)
            - 6.0 * tm * (x1 * c2 + x2 * s2)
            + 2.0 * tm * tm * c3
        )
        * p5
    )


@njit(cache=True)
def hamiltonian_harmonics(t, x, psi):
    """Fourier coefficients of ``u -> H``.

    Returns ``(A1, B1, A2, B2, A3)`` with
    ``H = A1 cos u + B1 sin u + A2 cos 2u + B2 sin 2u + A3 cos 3u``.
    """
    x1, x2, x3, x4 = x[0], x[1], x[2], x[3]
    p1, p2, p3, p4, p5 = psi[0], psi[1], psi[2], psi[3], psi[4]
    tm = t - 1.0
    out = np.empty(5)
    out[0] = -2.0 * p1 - 4.0 * x1 * p3 - 4.0 * x2 * p4 - 2.0 * (2.0 * x3 + x1 * x1 - x2 * x2) * p5
    out[1] = 2.0 * p2 - 4.0 * x2 * p3 + 4.0 * x1 * p4 - 4.0 * (x4 + x1 * x2) * p5
    out[2] = 2.0 * tm * p3 + 6.0 * tm * x1 * p5
    out[3] = -2.0 * tm * p4 + 6.0 * tm * x2 * p5
    out[4] = -2.0 * tm * tm * p5
    return out


@dataclass(frozen=True)
class CubicHamiltonian:
    """``H(t, y) = a3 y^3 + a2 y^2 + a1 y + a0`` with ``y = cos u`` on the base path.

    Fields may be arrays when built on a time grid.
    """

    a0: np.ndarray | float
    a1: np.ndarray | float
    a2: np.ndarray | float
    a3: np.ndarray | float

    def __call__(self, y):
        return ((self.a3 * y + self.a2) * y + self.a1) * y + self.a0

    def dy(self, y):
        return (3 * self.a3 * y + 2 * self.a2) * y + self.a1

    def huu_at_pi(self):
        # d2/du2 H(cos u) at u = pi reduces to dH/dy at y = -1
        return self.dy(-1.0)


def hamiltonian_cubic(spec: ProblemSpec, t) -> CubicHamiltonian:
    """Expand the base-path Hamiltonian as a cubic polynomial in ``cos u``."""
    t = _check_time(t, spec.T)
    x = base_state(t)
    psi = base_adjoint(spec, t)
    x1, x3 = x[0], x[2]
    p1, p3, p5 = psi[0], psi[2], psi[4]
    tm = t - 1.0
    a3 = -8 * tm**2 * p5
    a2 = 4 * tm * p3 + 12 * tm * x1 * p5
    a1 = -2 * p1 - 4 * x1 * p3 - (2 * (2 * x3 + x1**2) - 6 * tm**2) * p5
    a0 = -2 * tm * p3 - 6 * tm * x1 * p5
    return CubicHamiltonian(a0=a0, a1=a1, a2=a2, a3=a3)


def huu_at_pi(spec: ProblemSpec, t):
    """Second u-derivative of the base-path Hamiltonian at ``u = pi``."""
    t = _check_time(t, spec.T)
    v, mu, nu, m = spec.variant, spec.mu, spec.nu, spec.inv_M
    if v is Variant.LFUNCTIONAL:
        return -2 * (
            16 * nu * t**2
            - 4 * (2 * nu + 4 * nu * m - mu) * t
            + 2 * nu
            + 1
            - 4 * (2 * nu + mu) * m
            + 15 * nu * m**2
        )
    if v is Variant.SIGMA24:
        return -2 * (16 * t**2 - 8 * t + nu + 2)
    if v is Variant.SIGMA34:
        return -4 * (8 * t**2 - (4 - 2 * mu) * t + 1)
    return -2 * (16 * t**2 - (8 + 16 * m) * t + 2 - 8 * m + 15 * m**2)
