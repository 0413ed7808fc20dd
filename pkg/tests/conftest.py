import numpy as np
import pytest

from tvclip import NoiseSpec, add_noise, gen_square, gen_step


def difference_matrix(n):
    """Explicit (n-1) x n first-difference matrix, built entry by entry."""
    d = np.zeros((max(n - 1, 0), n))
    for k in range(n - 1):
        d[k, k] = -1.0
        d[k, k + 1] = 1.0
    return d


def tv_by_loop(x):
    return sum(abs(float(x[k + 1]) - float(x[k])) for k in range(len(x) - 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture(scope="session")
def step_fixture():
    clean = gen_step(256, 128, 0.0, 1.0)
    return clean, add_noise(clean, NoiseSpec("gaussian", 10.0, 42))


@pytest.fixture(scope="session")
def square_fixture():
    clean = gen_square(512, 64, 1.0)
    return clean, add_noise(clean, NoiseSpec("laplacian", 10.0, 42))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
