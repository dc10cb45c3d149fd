"""Row-by-row discretization of linear fractional differential equations.

A problem  sum_l q_l(t) D^(a_l) y + p(t) y = f(t)  is discretized on the
uniform grid x_m = m h by writing each Caputo derivative in substitution
form and replacing the classical derivatives under the trapezoidal sum by
finite-difference stencils.  Row m of the resulting lower-triangular
system is

    sum_{k=0..m} d_k y_k + p(x_m) y_m = f(x_m).

The d_k are accumulated generically (stencil weight x trapezoid pair
weight); the closed-form per-column coefficient lists that exist for
first- and second-order stencils are reproduced by this construction and
serve as test vectors only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .caputo import FracOrder
from .stencils import central, node_weights

__all__ = [
    "DerivativeTerm",
    "FDEProblem",
    "AssembledRow",
    "weight",
    "assemble_row",
    "assemble_system",
]


@dataclass(frozen=True)
class DerivativeTerm:
    """One q(t) * D^alpha y(t) term; alpha must be strictly fractional."""

    alpha: float
    coefficient: Callable[[float], float]

    def __post_init__(self):
        FracOrder(self.alpha)

    @property
    def n(self) -> int:
        return math.ceil(self.alpha)


@dataclass(frozen=True)
class FDEProblem:
    """Linear FDE with initial conditions y(0), y'(0), ..., y^(r-1)(0).

    The equation order r is ceil(max alpha); exactly r initial conditions
    are required.  Terms are kept sorted ascending by alpha.
    """

    terms: tuple[DerivativeTerm, ...]
    p: Callable[[float], float]
    f: Callable[[float], float]
    initial_conditions: tuple[float, ...]

    def __post_init__(self):
        terms = tuple(sorted(self.terms, key=lambda term: term.alpha))
        if not terms:
            raise ValueError("problem needs at least one derivative term")
        object.__setattr__(self, "terms", terms)
        ics = tuple(float(v) for v in self.initial_conditions)
        object.__setattr__(self, "initial_conditions", ics)
        if len(ics) != self.order:
            raise ValueError(
                f"order-{self.order} problem needs {self.order} initial conditions, got {len(ics)}"
            )

    @property
    def order(self) -> int:
        return self.terms[-1].n


@dataclass(frozen=True)
class AssembledRow:
    """Coefficients of one grid row: d_0..d_m, diagonal addend p_m, rhs f_m.

    ``degraded`` marks rows assembled with reduced-order fallback stencils
    (possible only for the first few rows of each derivative order).
    """

    m: int
    d: np.ndarray
    p_m: float
    rhs: float
    degraded: bool

    def __post_init__(self):
        if self.d.shape != (self.m + 1,):
            raise ValueError("row m must carry exactly m+1 coefficients")
        if not np.all(np.isfinite(self.d)):
            raise ValueError(f"non-finite coefficients in row {self.m}")


def weight(alpha: float, n: int, k: int, m: int, h: float) -> float:
    """Trapezoid pair weight ((m-k+1)h)**(n-a) - ((m-k)h)**(n-a).

    Strictly positive; the weights telescope to (mh)**(n-a) over k = 1..m.
    """
    if not 1 <= k <= m:
        raise ValueError(f"pair index k={k} outside 1..{m}")
    s = n - alpha
    return ((m - k + 1) * h) ** s - ((m - k) * h) ** s


def _kahan_add(d: np.ndarray, comp: np.ndarray, idx, values) -> None:
    y = values - comp[idx]
    t = d[idx] + y
    comp[idx] = (t - d[idx]) - y
    d[idx] = t


class _Assembler:
    """Caches per-exponent power tables (j h)**(n-a) for rows up to M."""

    def __init__(self, problem: FDEProblem, h: float, max_rows: int):
        if h <= 0:
            raise ValueError("step h must be positive")
        self.problem = problem
        self.h = float(h)
        nodes = np.arange(max_rows + 1) * self.h
        self.powers = {}
        for term in problem.terms:
            s = term.n - term.alpha
            if s not in self.powers:
                self.powers[s] = nodes**s

    def row(self, m: int) -> AssembledRow:
        if m < 1:
            raise ValueError("rows are assembled for m >= 1")
        h = self.h
        t = m * h
        d = np.zeros(m + 1)
        comp = np.zeros(m + 1)
        degraded = False
        for term in self.problem.terms:
            n = term.n
            s = n - term.alpha
            pw = self.powers[s]
            # phi_k = pw[m-k+1] - pw[m-k]; rev[i] = phi_{i+1}
            rev = (pw[1 : m + 1] - pw[:m])[::-1]
            pair = np.empty(m + 1)
            pair[0] = rev[0]
            pair[m] = rev[m - 1]
            if m > 1:
                pair[1:m] = rev[: m - 1] + rev[1:m]
            scale = term.coefficient(t) / (2.0 * math.gamma(n + 1 - term.alpha))
            n2 = (n + 1) // 2
            lo, hi = n2, m - n2
            if lo <= hi:
                st = central(n)
                coeffs = st.weights_float() * (scale / (st.norm_denominator * h**n))
                for o, a in zip(st.offsets, coeffs):
                    _kahan_add(d, comp, slice(lo + o, hi + o + 1), a * pair[lo : hi + 1])
            for j in range(m + 1):
                if lo <= j <= hi:
                    continue
                offs, wts, bn, deg = node_weights(j, m, n)
                degraded = degraded or deg
                _kahan_add(d, comp, j + offs, wts * (scale * pair[j] / (bn * h**n)))
        d.flags.writeable = False
        return AssembledRow(m, d, float(self.problem.p(t)), float(self.problem.f(t)), degraded)


def assemble_row(problem: FDEProblem, h: float, m: int) -> AssembledRow:
    """Assemble the single grid row m (t = m h)."""
    return _Assembler(problem, h, m).row(m)


def assemble_system(problem: FDEProblem, h: float, max_rows: int) -> list[AssembledRow]:
    """Assemble rows m = r..max_rows; rows 0..r-1 are fixed by the
    initial-condition prefix and carry no equation."""
    r = problem.order
    if max_rows < r:
        raise ValueError(f"need at least {r} rows for an order-{r} problem")
    assembler = _Assembler(problem, h, max_rows)
    return [assembler.row(m) for m in range(r, max_rows + 1)]
