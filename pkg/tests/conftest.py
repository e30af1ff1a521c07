import numpy as np
import pytest

from viscodual.models import RelaxationModel

ACCEPTANCE_LINES = []


def _log_uniform(rng, lo=1e-3, hi=1e3):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def random_relaxation(rng, max_atoms=8):
    """Random nondegenerate relaxation model with log-uniform parameters."""
    while True:
        n = int(rng.integers(0, max_atoms + 1))
        atoms = [(_log_uniform(rng), _log_uniform(rng)) for _ in range(n)]
        beta = 0.0 if rng.random() < 0.5 else _log_uniform(rng)
        f_inf = 0.0 if rng.random() < 0.5 else _log_uniform(rng)
        model = RelaxationModel(newtonian=beta, equilibrium=f_inf, spectrum=atoms)
        if not model.is_degenerate:
            return model


@pytest.fixture(scope="session")
def random_models():
    rng = np.random.default_rng(20261016)
    return [random_relaxation(rng) for _ in range(500)]


@pytest.fixture
def criterion():
    def report(number, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
