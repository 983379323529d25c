import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bombieri.errors import DomainError
from bombieri.integrator import IntegratorOptions, integrate
from bombieri.problem import (
    ProblemSpec,
    Variant,
    adjoint_rhs,
    base_adjoint,
    base_state,
    hamiltonian,
    hamiltonian_cubic,
    huu_at_pi,
    lowner_rhs,
    pick_coefficients,
)

from conftest import SAMPLE_SPECS, spec_id


def test_base_state_examples():
    np.testing.assert_array_equal(base_state(0.0), np.zeros(5))
    np.testing.assert_allclose(base_state(1.0), [2, 0, 3, 0, 4], atol=1e-14)
    # x5 = 14/8 - 12/4 + 1; also confirmed by integration and series composition below
    np.testing.assert_allclose(base_state(0.5), [1, 0, 0.25, 0, -0.25], atol=1e-14)


def test_base_state_matches_rk4_integration():
    x = integrate(lambda t, y: lowner_rhs(t, y, math.pi), np.zeros(5), 0.0, 0.5, IntegratorOptions(steps=200))
    np.testing.assert_allclose(x, base_state(0.5), atol=1e-10)


@pytest.mark.parametrize("t", [-0.01, 1.01, math.nan])
def test_base_state_rejects_times_outside_unit_interval(t):
    with pytest.raises(DomainError):
        base_state(t)


def test_base_state_vectorized_shape():
    assert base_state(np.linspace(0, 1, 7)).shape == (5, 7)


def test_base_adjoint_examples():
    for M in (math.inf, 25.0, 2.0):
        spec = ProblemSpec.linear(0.0, 0.0, M)
        for t in (0.0, 0.3 * spec.T, spec.T):
            np.testing.assert_allclose(base_adjoint(spec, t), [1, 0, 0, 0, 0], atol=1e-15)
    nu = -0.37
    np.testing.assert_allclose(base_adjoint(ProblemSpec.sigma24(nu), 1.0), [nu, 0, 0, 0, 1], atol=1e-14)
    np.testing.assert_allclose(
        base_adjoint(ProblemSpec.a4_bound(25.0), 0.0),
        [9 - 24 / 25 + 15 / 625, 0, 4 * (1 - 1 / 25), 0, 1],
        atol=1e-14,
    )


def test_base_adjoint_rejects_t_beyond_T():
    with pytest.raises(DomainError):
        base_adjoint(ProblemSpec.a4_bound(20.0), 0.99)


@pytest.mark.parametrize("spec", SAMPLE_SPECS, ids=spec_id)
def test_transversality(spec):
    np.testing.assert_allclose(base_adjoint(spec, spec.T), spec.terminal_adjoint(), atol=1e-14)


def _fd_residual(f, rhs, T, h):
    ts = np.linspace(2 * h, T - 2 * h, 9)
    worst = 0.0
    for t in ts:
        d = (f(t + h) - f(t - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(d - rhs(t)))))
    return worst


def test_base_state_satisfies_ode_second_order():
    f = base_state
    rhs = lambda t: lowner_rhs(t, base_state(t), math.pi)
    r1, r2 = _fd_residual(f, rhs, 1.0, 1e-3), _fd_residual(f, rhs, 1.0, 5e-4)
    assert r1 < 1e-4
    # polynomial of degree 3: central differences leave an O(h^2) remainder
    assert r2 <= r1 / 3.5 or r1 < 1e-12


@pytest.mark.parametrize("spec", SAMPLE_SPECS, ids=spec_id)
def test_base_adjoint_satisfies_adjoint_ode(spec):
    f = lambda t: base_adjoint(spec, t)
    rhs = lambda t: adjoint_rhs(t, base_state(t), base_adjoint(spec, t), math.pi)
    # the adjoint is a quadratic in t, so central differences are exact up to roundoff
    assert _fd_residual(f, rhs, spec.T, 1e-3) < 1e-9


def _series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai:
            for j, bj in enumerate(b[: n + 1 - i]):
                out[i + j] += ai * bj
    return out


def _compose(f, g, n):
    # f(g(z)) with g(0) = 0
    out = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        power = _series_mul(power, g, n)
        out = [o + f[k] * p for o, p in zip(out, power)]
    return out


def _pick_series(M, n=4):
    koebe = [Fraction(0)] + [Fraction(k) for k in range(1, n + 1)]
    inv = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(2, n + 1):
        inv[k] = -_compose(koebe, inv, n)[k]
    scaled = [c / M for c in koebe]
    return [M * c for c in _compose(inv, scaled, n)]


def test_pick_coefficients_examples():
    assert pick_coefficients(math.inf) == pytest.approx((2, 3, 4), abs=1e-14)
    assert pick_coefficients(1.0) == (0.0, 0.0, 0.0)
    assert pick_coefficients(2.0) == pytest.approx((1, 0.25, -0.25), abs=1e-14)


@pytest.mark.parametrize("M", [2, 3, 7, 25])
def test_pick_coefficients_match_series_composition(M):
    series = _pick_series(Fraction(M))
    assert series[1] == 1
    assert pick_coefficients(float(M)) == pytest.approx([float(c) for c in series[2:5]], abs=1e-13)


@pytest.mark.parametrize("M", [0.5, -3.0, math.nan])
def test_pick_coefficients_domain(M):
    with pytest.raises(DomainError):
        pick_coefficients(M)


def test_problem_spec_rejects_small_M():
    with pytest.raises(DomainError):
        ProblemSpec.linear(0.0, 0.0, 0.9)


def test_variant_aliases():
    assert Variant.parse("sigma42") is Variant.LFUNCTIONAL
    assert Variant.parse("a4") is Variant.A4BOUND
    with pytest.raises(ValueError):
        Variant.parse("nope")


def test_cubic_example_koebe_t0():
    cubic = hamiltonian_cubic(ProblemSpec.linear(), 0.0)
    ys = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(cubic(ys), -2 * ys, atol=1e-15)


spec_strategy = st.one_of(
    st.builds(ProblemSpec.linear, st.floats(-0.2, 0.5), st.floats(-0.09, 0.3),
              st.sampled_from([math.inf, 11.0, 30.0, 400.0])),
    st.builds(ProblemSpec.sigma24, st.floats(-0.9, 2.0)),
    st.builds(ProblemSpec.sigma34, st.floats(-0.8, 2.0)),
    st.builds(ProblemSpec.a4_bound, st.floats(11.0, 1e4)),
)


@given(spec_strategy, st.floats(0.0, 1.0), st.floats(0.0, 2 * math.pi))
def test_cubic_agrees_with_direct_hamiltonian(spec, frac, u):
    t = frac * spec.T
    direct = hamiltonian(t, base_state(t), base_adjoint(spec, t), u)
    assert hamiltonian_cubic(spec, t)(math.cos(u)) == pytest.approx(direct, abs=1e-12)


@given(spec_strategy, st.floats(0.0, 1.0))
def test_huu_table_matches_cubic_derivative(spec, frac):
    t = frac * spec.T
    assert huu_at_pi(spec, t) == pytest.approx(hamiltonian_cubic(spec, t).huu_at_pi(), abs=1e-11)


@pytest.mark.parametrize("spec", SAMPLE_SPECS, ids=spec_id)
def test_huu_matches_second_difference_in_u(spec):
    t = 0.37 * spec.T
    x, psi = base_state(t), base_adjoint(spec, t)
    h = 1e-4
    d2 = (hamiltonian(t, x, psi, math.pi + h) - 2 * hamiltonian(t, x, psi, math.pi)
          + hamiltonian(t, x, psi, math.pi - h)) / h**2
    assert d2 == pytest.approx(huu_at_pi(spec, t), abs=1e-5)


def test_huu_examples():
    assert huu_at_pi(ProblemSpec.sigma24(0.0), 0.0) == pytest.approx(-4.0)
    assert huu_at_pi(ProblemSpec.sigma34(0.0), 0.5) == pytest.approx(-4.0)
    for t in (0.0, 0.4, 1.0):
        assert huu_at_pi(ProblemSpec.linear(), t) == pytest.approx(-2.0)


def test_objective_at_base_is_pick_functional():
    spec = ProblemSpec.linear(0.3, -0.05, 25.0)
    a2, a3, a4 = pick_coefficients(25.0)
    assert spec.objective(base_state(spec.T)) == pytest.approx(a2 + 0.3 * a3 - 0.05 * a4, abs=1e-14)
