import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

# the 14-point set of the GetClumpsPartition worked example, as printed
EXAMPLE_POINTS = [
    (1, 1), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5),
    (4, 6), (5, 6), (6, 6), (7, 5), (8, 3), (9, 2), (9, 1),
]
EXAMPLE_Q = [1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 2, 1, 1]
EXAMPLE_P = [1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 3, 4, 5, 5]

# the C++ example uses this truncated constant
PI_EXAMPLE = 3.14159265


@pytest.fixture
def clump_example():
    a = np.array([p[0] for p in EXAMPLE_POINTS], dtype=float)
    b = np.array([p[1] for p in EXAMPLE_POINTS], dtype=float)
    return a, b


def sin_example():
    n = 1001
    x = np.arange(n) / (n - 1)
    return x, np.sin(10 * PI_EXAMPLE * x) + x


@pytest.fixture
def sin_pair():
    return sin_example()


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
