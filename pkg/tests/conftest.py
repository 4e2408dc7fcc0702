"""Shared numerical oracles for the test suite.

The Richardson helper is the independent finite-difference oracle used to
validate the analytic derivative engines; it must never share code with
the library paths it checks.
"""

import math

import pytest


def central_difference(f, x, n, h):
    """Central finite-difference estimate of the n-th derivative."""
    acc = 0.0
    for i in range(n + 1):
        w = (-1.0) ** i * math.comb(n, i)
        acc += w * f(x + (0.5 * n - i) * h)
    return acc / h**n


def richardson_derivative(f, x, n, h=1e-4):
    """Richardson-extrapolated central difference: O(h^2) -> O(h^4)."""
    d1 = central_difference(f, x, n, h)
    d2 = central_difference(f, x, n, 0.5 * h)
    return (4.0 * d2 - d1) / 3.0


@pytest.fixture
def richardson():
    return richardson_derivative
