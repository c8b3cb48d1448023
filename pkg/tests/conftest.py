import numpy as np
import pytest

ACCEPTANCE_LINES = []


class LinearSystem:
    """dx/dt = M x + c, used as an oracle-friendly test FOM."""

    def __init__(self, M, c=None):
        self.M = np.asarray(M, dtype=float)
        self.c = np.zeros(self.M.shape[0]) if c is None else np.asarray(c, dtype=float)
        self.state_size = self.velocity_size = self.M.shape[0]

    def velocity(self, x, t=0.0):
        return self.M @ x + self.c

    def apply_jacobian(self, x, t, B):
        return self.M @ B


class ZeroSystem(LinearSystem):
    def __init__(self, n):
        super().__init__(np.zeros((n, n)))


@pytest.fixture
def rng():
    return np.random.default_rng(20201018)


def random_orthonormal(rng, n, p):
    Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    return np.asfortranarray(Q)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
