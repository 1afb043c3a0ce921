"""One-dimensional Gauss-Legendre and Gauss-Lobatto quadrature rules.

Nodes are computed by Newton iteration on the defining orthogonal-polynomial
conditions (no hard-coded tables); rules live on the reference interval
[-1, 1] and are mapped affinely where needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_NEWTON_TOL = 1e-15
_MAX_N = 20


@dataclass(frozen=True)
class QuadRule1D:
    """Nodes (strictly increasing, in [-1,1] on the reference interval)
    and positive weights."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _legendre(n: int, x: np.ndarray):
    """Return (P_n(x), P_{n-1}(x)) by the three-term recurrence."""
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for j in range(n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p, p_prev


def gauss_legendre(n: int) -> QuadRule1D:
    """Gauss-Legendre rule with n nodes, exact for degree <= 2n-1."""
    if not 1 <= n <= _MAX_N:
        raise ValueError(f"gauss_legendre: n={n} outside supported range 1..{_MAX_N}")
    if n == 1:
        return QuadRule1D(np.array([0.0]), np.array([2.0]))
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (4 * k - 1) / (4 * n + 2))
    for _ in range(100):
        p, p_prev = _legendre(n, x)
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    x = np.sort(x)
    x = (x - x[::-1]) / 2.0  # symmetrize rounding
    p, p_prev = _legendre(n, x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return QuadRule1D(x, w)


def gauss_lobatto(n: int) -> QuadRule1D:
    """Gauss-Lobatto rule with n nodes including both endpoints,
    exact for degree <= 2n-3."""
    if not 2 <= n <= _MAX_N:
        raise ValueError(f"gauss_lobatto: n={n} outside supported range 2..{_MAX_N}")
    if n == 2:
        return QuadRule1D(np.array([-1.0, 1.0]), np.array([1.0, 1.0]))
    # Interior nodes are the roots of P'_{n-1}; Newton update uses the
    # identity (1-x^2) P'_{n-1} = (n-1)(P_{n-2} - x P_{n-1}), whose Newton
    # step simplifies to x - (x P_{n-1} - P_{n-2}) / (n P_{n-1}).
    x = np.cos(np.pi * np.arange(n) / (n - 1))
    for _ in range(100):
        p, p_prev = _legendre(n - 1, x)
        dx = (x * p - p_prev) / (n * p)
        x -= dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    x = np.sort(x)
    x = (x - x[::-1]) / 2.0
    x[0], x[-1] = -1.0, 1.0
    p, _ = _legendre(n - 1, x)
    w = 2.0 / (n * (n - 1) * p * p)
    return QuadRule1D(x, w)


def map_to_interval(rule: QuadRule1D, a: float, b: float) -> QuadRule1D:
    """Affine image of a reference rule on [a, b]; weights sum to b-a."""
    if not a < b:
        raise ValueError(f"map_to_interval: need a < b, got [{a}, {b}]")
    half = 0.5 * (b - a)
    nodes = a + half * (rule.nodes + 1.0)
    # pin image endpoints exactly for Lobatto-type rules
    if rule.nodes[0] == -1.0:
        nodes[0] = a
    if rule.nodes[-1] == 1.0:
        nodes[-1] = b
    return QuadRule1D(nodes, half * rule.weights)
