import numpy as np
import pytest

from vibqc.pauli import PauliSum

ACCEPTANCE_LINES: list[str] = []


def random_sum(rng, n, k=6, hermitian=False):
    terms = {}
    for _ in range(k):
        letters = "".join(rng.choice(list("IXYZ"), n))
        c = rng.normal() if hermitian else rng.normal() + 1j * rng.normal()
        terms[letters] = terms.get(letters, 0) + c
    return PauliSum(terms, n)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
