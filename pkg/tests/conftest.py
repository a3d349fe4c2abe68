import math

import pytest

from fuzzy_voi import (
    DecisionProblem,
    Distribution,
    GaussianExperiment,
    StateSpace,
    make_crisp,
)
from fuzzy_voi.serialization import parse_problem

# cut reported for the original membership shapes: 110 - 3.2 ln 6.5
REFERENCE_CUT = 110 - 3.2 * math.log(6.5)


@pytest.fixture(scope="session")
def neuro_file():
    return parse_problem("neurologist.json")


@pytest.fixture(scope="session")
def neuro(neuro_file):
    return neuro_file.problem


@pytest.fixture(scope="session")
def score(neuro_file):
    return neuro_file.experiments["score"]


@pytest.fixture(scope="session")
def qc_file():
    return parse_problem("quality_control.json")


@pytest.fixture(scope="session")
def crisp_neuro():
    """Neurologist structure with crisp utilities -1 and -5."""
    z = make_crisp(0.0)
    return DecisionProblem(
        StateSpace(("needs_surgery", "no_surgery")),
        ("operate", "do_not_operate"),
        Distribution((0.6, 0.4)),
        ((z, make_crisp(-5.0)), (make_crisp(-1.0), z)),
    )


@pytest.fixture(scope="session")
def gaussian_score():
    return GaussianExperiment((120.0, 100.0), (8.0, 8.0))



def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
