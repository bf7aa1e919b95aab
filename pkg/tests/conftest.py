import numpy as np
import pytest

from lightcone import chart, invariants


@pytest.fixture(scope="session")
def frames():
    """Canonical frames of the catalog charts on a 12x12 grid, built once."""
    g = chart.GridSpec(12, 12)
    return {name: invariants.surface_frame(chart.catalog(name), g)
            for name in ("sphere", "clifford", "veronese", "perturbed-clifford")}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: int(k.split()[0])):
            terminalreporter.write_line(RESULTS[key])
