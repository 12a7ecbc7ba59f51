import itertools

import numpy as np
import pytest


def naive_F(x, y, sigma0, alpha):
    """Pair-by-pair assignment objective; sigma0 is 0-based."""
    n = len(x)
    total = 0.0
    for i in range(n):
        for k in range(i + 1, n):
            total += abs(x[i] - x[k]) ** alpha * abs(y[sigma0[i]] - y[sigma0[k]]) ** alpha
    return total


def naive_gm(x, y, sigma0, alpha):
    n = len(x)
    total = 0.0
    for i in range(n):
        for k in range(n):
            a = abs(x[i] - x[k]) ** alpha
            b = abs(y[sigma0[i]] - y[sigma0[k]]) ** alpha
            total += (a - b) ** 2
    return total / n**2


def enumerate_optima(values: dict, maximize=True, rtol=1e-9, scale=None):
    """Set of 1-based tuples attaining the best value within ``rtol``."""
    best = max(values.values()) if maximize else min(values.values())
    tol = rtol * (abs(best) if scale is None else scale)
    if maximize:
        return {p for p, v in values.items() if v >= best - tol}
    return {p for p, v in values.items() if v <= best + tol}


def brute_values(x, y, alpha, fn=naive_F):
    n = len(x)
    return {tuple(i + 1 for i in p): fn(x, y, p, alpha) for p in itertools.permutations(range(n))}


def random_sorted(rng, n, low=-2.0, high=2.0):
    while True:
        pts = np.sort(rng.uniform(low, high, n))
        if np.all(np.diff(pts) > 1e-6):
            return pts


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
