"""Shared fixtures plus the acceptance-summary terminal section."""

import numpy as np
import pytest

_acceptance_results: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.fspath.basename == "test_acceptance.py":
        word = "PASS" if rep.passed else "FAIL"
        _acceptance_results.append(f"[{word}] {item.name}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_results:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_results:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(8214)


def random_weighted(rng, p, density=0.5):
    """Random weight matrix in [0,1], zero diagonal, given edge density."""
    w = rng.random((p, p)) * (rng.random((p, p)) < density)
    np.fill_diagonal(w, 0.0)
    return w


def random_benchmark(rng, p, density=0.3):
    """Random 0/1 benchmark with at least one edge and one non-edge."""
    while True:
        adj = (rng.random((p, p)) < density).astype(float)
        np.fill_diagonal(adj, 0.0)
        edges = adj.sum()
        if 0 < edges < p * (p - 1):
            return adj
