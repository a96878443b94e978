import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from supergc.sampling import random_expr

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def exprs(draw):
    """Random expressions over a fixed pool of atoms of both parities."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_expr(random.Random(seed))


@st.composite
def even_exprs(draw):
    e = draw(exprs())
    from supergc.expr import Expr
    return Expr({k: c for k, c in e.terms.items() if len(k[1]) % 2 == 0})


@pytest.fixture
def rng():
    return random.Random(1234)


# one summary line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
