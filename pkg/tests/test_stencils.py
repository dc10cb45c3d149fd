import math
from fractions import Fraction

import numpy as np
import pytest

from fracsubst.stencils import (
    backward,
    backward_first_order,
    central,
    forward,
    forward_first_order,
    node_weights,
)


def frac(values):
    return tuple(Fraction(v) for v in values)


def test_central_first_orders():
    st = central(1)
    assert st.offsets == (-1, 0, 1)
    assert st.weights == frac([-1, 0, 1])
    assert st.norm_denominator == 2

    st = central(2)
    assert st.offsets == (-1, 0, 1)
    assert st.weights == frac([1, -2, 1])
    assert st.norm_denominator == 1


def test_central_fourth_is_binomial():
    assert central(4).weights == frac([1, -4, 6, -4, 1])
    assert central(4).norm_denominator == 1


def test_central_fifth():
    st = central(5)
    assert st.offsets == tuple(range(-3, 4))
    assert st.weights == frac([-1, 4, -5, 0, 5, -4, 1])
    assert st.norm_denominator == 2


def test_forward_stencils():
    st = forward(1)
    assert st.offsets == (0, 1, 2)
    assert st.weights == frac([-3, 4, -1])
    assert st.norm_denominator == 2

    st = forward(2)
    assert st.offsets == (0, 1, 2, 3)
    assert st.weights == frac([2, -5, 4, -1])
    assert st.norm_denominator == 1


def test_forward_third_moment_conditions():
    st = forward(3)
    assert st.moment(0) == 0
    assert st.moment(1) == 0
    assert st.moment(2) == 0
    assert st.moment(3) == st.norm_denominator
    assert st.moment(4) == 0


def test_backward_stencils():
    st = backward(1)
    assert st.offsets == (-2, -1, 0)
    assert st.weights == frac([1, -4, 3])
    assert st.norm_denominator == 2

    st = backward(2)
    assert st.offsets == (-3, -2, -1, 0)
    assert st.weights == frac([-1, 4, -5, 2])
    assert st.norm_denominator == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_backward_mirrors_forward(n):
    fwd, bwd = forward(n), backward(n)
    sign = 1 if n % 2 == 0 else -1
    assert bwd.offsets == tuple(-o for o in reversed(fwd.offsets))
    assert bwd.weights == tuple(sign * w for w in reversed(fwd.weights))


def _poly_coeffs(n):
    """Coefficients of (a-b)^n for even n, (a-b)^(n-1)(a^2-b^2) for odd n,
    listed ascending by offset (reverse of the descending-power listing)."""
    base = [Fraction((-1) ** k * math.comb(n if n % 2 == 0 else n - 1, k))
            for k in range((n if n % 2 == 0 else n - 1) + 1)]
    if n % 2 == 1:
        out = [Fraction(0)] * (len(base) + 2)
        for i, c in enumerate(base):
            out[i] += c       # * a^2
            out[i + 2] -= c   # * -b^2
        base = out
    return tuple(reversed(base))


@pytest.mark.parametrize("n", [2, 4, 6, 8, 3, 5, 7])
def test_central_weights_are_difference_polynomial_coefficients(n):
    assert central(n).weights == _poly_coeffs(n)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_even_central_annihilates_extra_moment(n):
    st = central(n)
    assert len(st.offsets) == n + 1
    assert st.moment(n + 1) == 0


@pytest.mark.parametrize("n", range(3, 9))
def test_central_recursion_by_second_difference(n):
    inner = central(n - 2)
    outer = central(n)
    conv = {}
    for o, a in zip(inner.offsets, inner.weights):
        for shift, c in ((-1, 1), (0, -2), (1, 1)):
            conv[o + shift] = conv.get(o + shift, Fraction(0)) + a * c
    assert outer.offsets == tuple(sorted(conv))
    assert outer.weights == tuple(conv[o] for o in outer.offsets)
    assert outer.norm_denominator == inner.norm_denominator


@pytest.mark.parametrize("kind", [central, forward, backward])
@pytest.mark.parametrize("n", range(1, 6))
def test_exact_on_polynomials_up_to_degree_n_plus_1(kind, n, rng=np.random.default_rng(7)):
    st = kind(n)
    coeffs = rng.integers(-3, 4, size=n + 2).astype(float)
    h = 0.3
    at = 10
    xs = (np.arange(at + st.offsets[0], at + st.offsets[-1] + 1)) * h
    samples = np.zeros(25)
    samples[at + st.offsets[0] : at + st.offsets[-1] + 1] = np.polyval(coeffs, xs)
    deriv_coeffs = np.polyder(coeffs, n)
    expected = np.polyval(deriv_coeffs, at * h)
    got = st.apply(samples, at, h)
    assert got == pytest.approx(expected, rel=1e-10, abs=1e-10)


def test_first_order_fallbacks():
    st = forward_first_order(1)
    assert st.offsets == (0, 1)
    assert st.weights == frac([-1, 1])
    assert st.norm_denominator == 1
    st = backward_first_order(2)
    assert st.offsets == (-2, -1, 0)
    assert st.weights == frac([1, -2, 1])


def test_node_assignment_standard():
    offs, _, _, deg = node_weights(0, 10, 1)
    assert not deg and offs[0] == 0  # forward at the left edge
    offs, _, _, deg = node_weights(10, 10, 1)
    assert not deg and offs[-1] == 0  # backward at the right edge
    offs, _, _, deg = node_weights(5, 10, 2)
    assert not deg and tuple(offs) == (-1, 0, 1)
    # order 3 needs two one-sided nodes on each end
    offs, _, _, deg = node_weights(1, 10, 3)
    assert not deg and offs[0] == 0


def test_node_assignment_fallbacks():
    offs, wts, bn, deg = node_weights(0, 1, 1)
    assert deg and tuple(offs) == (0, 1) and tuple(wts) == (-1.0, 1.0) and bn == 1
    offs, wts, bn, deg = node_weights(1, 1, 1)
    assert deg and tuple(offs) == (-1, 0) and tuple(wts) == (-1.0, 1.0)
    # window anchored at 0 when neither one-sided difference fits at j
    offs, _, _, deg = node_weights(1, 3, 3)
    assert deg and tuple(offs) == (-1, 0, 1, 2)
    with pytest.raises(ValueError):
        node_weights(0, 1, 2)


def test_rejects_bad_order():
    for bad in (0, -1, 1.5):
        with pytest.raises(ValueError):
            central(bad)
