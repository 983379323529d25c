import math

import pytest
from hypothesis import settings

from bombieri.integrator import IntegratorOptions
from bombieri.problem import ProblemSpec

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fast_integ():
    return IntegratorOptions(steps=2000)


# one admissible point per variant, used across modules
SAMPLE_SPECS = [
    ProblemSpec.linear(-0.1, -0.05),
    ProblemSpec.linear(0.2, 0.1, 25.0),
    ProblemSpec.linear(-0.1, 0.0, 11.0),
    ProblemSpec.sigma24(-0.5),
    ProblemSpec.sigma34(-0.5),
    ProblemSpec.a4_bound(30.0),
    ProblemSpec.a4_bound(math.inf),
]


def spec_id(spec):
    return f"{spec.variant.value}-mu{spec.mu}-nu{spec.nu}-M{spec.M}"


_SOLVED = {}


@pytest.fixture(scope="session")
def solved():
    """Memoized ``solve(name, cfg)`` so module and acceptance tests share runs."""
    from bombieri.solver import RootScanConfig, solve

    def get(name, cfg=None):
        key = (name, cfg)
        if key not in _SOLVED:
            _SOLVED[key] = solve(name, cfg or RootScanConfig())
        return _SOLVED[key]

    return get
