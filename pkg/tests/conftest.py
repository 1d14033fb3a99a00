import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from refined_assortment.choice_core import Instance  # noqa: E402
from refined_assortment.lcmnl import LCMNLModel  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def record_acceptance(number, title, passed, detail=""):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    return record_acceptance


def random_lcmnl(rng, n, m, low=0.05, high=5.0):
    v0 = rng.uniform(low, high, m)
    v = rng.uniform(low, high, (m, n))
    theta = rng.dirichlet(np.ones(m))
    r = rng.uniform(0.5, 10.0, n)
    return Instance(r, LCMNLModel(v0, v, theta))


@st.composite
def lcmnl_instances(draw, max_n=5, max_m=4, min_n=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(1, max_m))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_lcmnl(np.random.default_rng(seed), n, m)


@st.composite
def refinements(draw, n):
    return np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n)))
