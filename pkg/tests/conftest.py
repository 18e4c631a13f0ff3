import numpy as np
import pytest

from galinv import CurveJet, Helix


def random_jet(rng: np.random.Generator, scale: float = 1.0) -> CurveJet:
    """A generic jet with independent Gaussian derivatives (nondegenerate almost surely)."""
    v = rng.standard_normal((5, 3)) * scale
    return CurveJet(float(rng.uniform(-3, 3)), v[0], v[1], v[2], v[3], v[4])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def unit_helix():
    """Helix (cos, sin, 1) at unit speed: kappa = tau = 1/2."""
    return Helix(1.0, 1.0, arclength=True)


# one line per acceptance criterion, repeated at the end of the run so the
# lines survive output capturing
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
