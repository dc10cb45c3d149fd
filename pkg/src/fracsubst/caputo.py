"""Caputo (and Riemann-Liouville) derivatives of a known function at a point.

The substitution u = (t - x)**(n - alpha) removes the kernel singularity
from the Caputo integral, leaving

    D^a f(t) = 1/Gamma(n+1-a) * integral_0^(t^(n-a)) f^(n)(t - u^(1/(n-a))) du

which the trapezoidal rule turns into a finite sum with the telescoping
weights (t - x_{k-1})**(n-a) - (t - x_k)**(n-a) > 0.  Nodes need not be
uniform here; the uniform restriction belongs to the equation solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .stencils import node_weights

__all__ = [
    "FracOrder",
    "Grid",
    "caputo_substitution",
    "caputo_substitution_sampled",
    "riemann_liouville",
]


@dataclass(frozen=True)
class FracOrder:
    """Strictly fractional derivative order: n-1 < alpha < n = ceil(alpha).

    Integer orders are rejected; every formula here assumes the exponent
    n - alpha + 1 is non-integer.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or a <= 0 or a == int(a):
            raise ValueError(f"order must be a positive non-integer, got {self.alpha!r}")

    @property
    def n(self) -> int:
        return math.ceil(self.alpha)


def _as_order(order: FracOrder | float) -> FracOrder:
    return order if isinstance(order, FracOrder) else FracOrder(float(order))


class Grid:
    """Strictly increasing nodes x_0 = 0 < x_1 < ... < x_m.

    Detects uniform spacing; ``h`` is defined only for uniform grids.
    """

    def __init__(self, nodes: Sequence[float]):
        arr = np.asarray(nodes, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("grid needs at least two nodes")
        if arr[0] != 0.0:
            raise ValueError("grid must start at 0")
        steps = np.diff(arr)
        if np.any(steps <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        arr.flags.writeable = False
        self.nodes = arr
        self.uniform = bool(np.allclose(steps, steps[0], rtol=1e-9, atol=0.0))
        self.h = float(steps[0]) if self.uniform else None

    @classmethod
    def uniform_grid(cls, h: float, m: int) -> "Grid":
        if h <= 0 or m < 1:
            raise ValueError("need h > 0 and at least one step")
        return cls(np.arange(m + 1) * float(h))

    @property
    def m(self) -> int:
        return self.nodes.size - 1

    @property
    def t_end(self) -> float:
        return float(self.nodes[-1])

    def __len__(self) -> int:
        return self.nodes.size


def _as_grid(grid: Grid | Sequence[float]) -> Grid:
    return grid if isinstance(grid, Grid) else Grid(grid)


def substitution_weights(nodes: np.ndarray, exponent: float) -> np.ndarray:
    """Telescoping weights (t-x_{k-1})**s - (t-x_k)**s, k = 1..m, t = x_m.

    Evaluated as a**s * -expm1(s*log(b/a)) to avoid the cancellation that
    the direct difference suffers when s is near 0 (alpha near n).
    """
    t = nodes[-1]
    a = t - nodes[:-1]
    b = t - nodes[1:]
    w = np.empty(a.size)
    interior = b > 0.0
    w[interior] = a[interior] ** exponent * -np.expm1(
        exponent * np.log(b[interior] / a[interior])
    )
    w[~interior] = a[~interior] ** exponent
    return w


def caputo_substitution(
    dnf: Callable[[float], float],
    order: FracOrder | float,
    grid: Grid | Sequence[float],
) -> float:
    """Caputo derivative of f at t = x_m from its n-th classical derivative.

    ``dnf`` must be evaluable on [0, t].  Error is O(h_max**(n - alpha + 1))
    for smooth f.  The products are accumulated with exact (compensated)
    summation, taken from the singular end k = m down to k = 1.
    """
    order = _as_order(order)
    grid = _as_grid(grid)
    if grid.t_end <= 0:
        raise ValueError("evaluation point t must be positive")
    n, alpha = order.n, order.alpha
    w = substitution_weights(grid.nodes, n - alpha)
    g = np.array([dnf(x) for x in grid.nodes], dtype=float)
    pairs = 0.5 * (g[:-1] + g[1:]) * w
    return math.fsum(pairs[::-1]) / math.gamma(n + 1 - alpha)


def caputo_substitution_sampled(
    samples: Sequence[float],
    order: FracOrder | float,
    grid: Grid | Sequence[float],
) -> float:
    """Caputo derivative at t = x_m from samples of f on a uniform grid.

    The n-th derivative values in the substitution sum are replaced by
    second-order finite differences: forward stencils at the first n2
    nodes, backward at the last n2, central in between (falling back to
    first-order one-sided differences on grids too short for the wide
    stencils).
    """
    order = _as_order(order)
    grid = _as_grid(grid)
    if not grid.uniform:
        raise ValueError("sampled evaluation requires a uniform grid")
    y = np.asarray(samples, dtype=float)
    if y.shape != grid.nodes.shape:
        raise ValueError("samples must match the grid nodes")
    n, alpha = order.n, order.alpha
    m, h = grid.m, grid.h
    if m < n:
        raise ValueError(f"grid with {m + 1} nodes is too short for order n={n}")
    w = substitution_weights(grid.nodes, n - alpha)
    deriv = np.empty(m + 1)
    for j in range(m + 1):
        offs, wts, bn, _ = node_weights(j, m, n)
        deriv[j] = (wts @ y[j + offs]) / (bn * h**n)
    pairs = 0.5 * (deriv[:-1] + deriv[1:]) * w
    return math.fsum(pairs[::-1]) / math.gamma(n + 1 - alpha)


def riemann_liouville(
    f0_derivs: Sequence[float],
    order: FracOrder | float,
    caputo_value: float,
    t: float,
) -> float:
    """Riemann-Liouville derivative from the Caputo value at the same point.

    The two definitions differ by the Taylor-prefix correction

        sum_{j=0}^{n-1} f^(j)(0) * t**(j-alpha) / Gamma(j+1-alpha),

    which vanishes for zero initial data.  ``f0_derivs`` supplies
    f(0), f'(0), ..., f^(n-1)(0).
    """
    order = _as_order(order)
    if t <= 0:
        raise ValueError("evaluation point t must be positive")
    n, alpha = order.n, order.alpha
    if len(f0_derivs) != n:
        raise ValueError(f"need the first {n} Taylor coefficients, got {len(f0_derivs)}")
    correction = math.fsum(
        f0_derivs[j] * t ** (j - alpha) / math.gamma(j + 1 - alpha) for j in range(n)
    )
    return caputo_value + correction
