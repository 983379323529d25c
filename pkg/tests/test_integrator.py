import math

import numpy as np
import pytest
from numba import njit

from bombieri.errors import DenominatorVanishing, IntegrationError, NumericalError
from bombieri.integrator import IntegratorOptions, integrate, order_estimate
from bombieri.problem import ProblemSpec
from bombieri.variational import _rhs_kernel, initial_state, variational_coeffs


def decay(t, y):
    return -y


decay_jit = njit(decay)


def poly(t, y):
    return np.array([2.0, 10 * t - 2, 42 * t * t - 24 * t + 2])


@pytest.mark.parametrize("method", ["rk4", "abm4"])
def test_exponential(method):
    y = integrate(decay, [1.0], 0.0, 1.0, IntegratorOptions(method, 1000))
    assert y[0] == pytest.approx(math.exp(-1), abs=1e-12)


@pytest.mark.parametrize("method", ["rk4", "abm4"])
def test_cubic_polynomial_rhs_is_exact(method):
    y = integrate(poly, np.zeros(3), 0.0, 1.0, IntegratorOptions(method, 16))
    np.testing.assert_allclose(y, [2, 3, 4], atol=1e-13)


def test_order_rk4():
    assert order_estimate(decay, [1.0], 0.0, 1.0, 20, "rk4") == pytest.approx(4.0, abs=0.1)


def test_order_abm4():
    assert order_estimate(decay, [1.0], 0.0, 1.0, 40, "abm4") == pytest.approx(4.0, abs=0.2)


def test_order_on_variational_system():
    k = variational_coeffs(ProblemSpec.sigma34(-0.5)).packed()
    assert order_estimate(_rhs_kernel, initial_state(), 0.0, 1.0, 50, "rk4", (k,)) >= 3.8


@pytest.mark.parametrize("method", ["rk4", "abm4"])
def test_jitted_and_python_paths_agree_bitwise(method):
    opts = IntegratorOptions(method, 257)
    a = integrate(decay, [1.0, 2.0], 0.0, 1.3, opts)
    b = integrate(decay_jit, [1.0, 2.0], 0.0, 1.3, opts)
    assert np.array_equal(a, b)


def test_deterministic():
    k = variational_coeffs(ProblemSpec.linear(-0.1, -0.05)).packed()
    runs = [integrate(_rhs_kernel, initial_state(), 0.0, 1.0, IntegratorOptions(steps=500), (k,)) for _ in range(3)]
    assert all(np.array_equal(runs[0], r) for r in runs[1:])


def test_rk4_abm4_agree_on_smooth_system():
    k = variational_coeffs(ProblemSpec.a4_bound(30.0)).packed()
    a = integrate(_rhs_kernel, initial_state(), 0.0, 1 - 1 / 30, IntegratorOptions("rk4", 4000), (k,))
    b = integrate(_rhs_kernel, initial_state(), 0.0, 1 - 1 / 30, IntegratorOptions("abm4", 4000), (k,))
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_trajectory_recording():
    ts, ys = integrate(decay, [1.0], 0.0, 2.0, IntegratorOptions(steps=8, record_trajectory=True))
    assert ts.shape == (9,) and ys.shape == (9, 1)
    assert ts[-1] == pytest.approx(2.0)
    assert ys[-1, 0] == integrate(decay, [1.0], 0.0, 2.0, IntegratorOptions(steps=8))[0]


def test_options_validation():
    with pytest.raises(ValueError):
        IntegratorOptions("abm4", 3)
    with pytest.raises(ValueError):
        IntegratorOptions("rk4", 0)
    with pytest.raises(ValueError):
        IntegratorOptions("euler", 10)
    assert IntegratorOptions("ABM4", 4).method == "abm4"


def test_reversed_interval_rejected():
    with pytest.raises(ValueError):
        integrate(decay, [1.0], 1.0, 0.0)


def test_rhs_errors_carry_time():
    def bad(t, y):
        if t > 0.5:
            raise DenominatorVanishing(t, 0.0)
        return -y

    with pytest.raises(IntegrationError) as info:
        integrate(bad, [1.0], 0.0, 1.0, IntegratorOptions(steps=10))
    assert info.value.t == pytest.approx(0.55)
    assert isinstance(info.value.__cause__, DenominatorVanishing)


def test_non_finite_result_rejected():
    with pytest.raises(NumericalError), np.errstate(over="ignore", invalid="ignore"):
        integrate(lambda t, y: y * y, [1.0], 0.0, 2.0, IntegratorOptions(steps=10))
