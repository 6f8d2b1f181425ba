"""Exact polynomial arithmetic: identities and frozen known values."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from otcohom import polys

F = Fraction

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
poly_st = st.lists(fracs, min_size=0, max_size=5)


def nonzero_poly(draw_size=4):
    return st.lists(fracs, min_size=1, max_size=draw_size).filter(
        lambda c: any(x != 0 for x in c)
    )


def test_normalize_strips_trailing_zeros():
    assert polys.normalize([F(1), F(2), F(0), F(0)]) == [F(1), F(2)]
    assert polys.normalize([F(0)]) == []
    assert polys.degree([]) == -1
    assert polys.degree([F(3), F(0), F(7)]) == 2


def test_trailing_zeros():
    assert polys.trailing_zeros([F(0), F(0), F(3)]) == 2
    assert polys.trailing_zeros([F(1)]) == 0
    assert polys.trailing_zeros([F(0), F(5), F(0), F(1)]) == 1


@given(poly_st, poly_st, poly_st)
def test_ring_identities(a, b, c):
    ab = polys.poly_add(a, b)
    assert polys.normalize(ab) == polys.normalize(polys.poly_add(b, a))
    left = polys.poly_mul(a, polys.poly_add(b, c))
    right = polys.poly_add(polys.poly_mul(a, b), polys.poly_mul(a, c))
    assert polys.normalize(left) == polys.normalize(right)
    assert polys.normalize(polys.poly_sub(a, a)) == []


@given(poly_st, nonzero_poly())
def test_divmod_reconstructs(a, b):
    q, r = polys.poly_divmod(a, b)
    back = polys.poly_add(polys.poly_mul(q, b), r)
    assert polys.normalize(back) == polys.normalize(a)
    assert polys.degree(r) < polys.degree(b) or polys.degree(r) == -1


@given(poly_st, poly_st)
def test_derivative_product_rule(a, b):
    lhs = polys.derivative(polys.poly_mul(a, b))
    rhs = polys.poly_add(
        polys.poly_mul(polys.derivative(a), b),
        polys.poly_mul(a, polys.derivative(b)),
    )
    assert polys.normalize(lhs) == polys.normalize(rhs)


@given(poly_st, fracs)
def test_eval_matches_expansion(a, x):
    expected = sum((c * x**i for i, c in enumerate(a)), F(0))
    assert polys.eval_at(a, x) == expected


@given(poly_st, fracs, fracs)
def test_eval_gauss_matches_complex_expansion(a, re, im):
    acc_re, acc_im = F(0), F(0)
    # multiply out (re + i im)^k term by term
    pr, pi = F(1), F(0)
    for c in a:
        acc_re += c * pr
        acc_im += c * pi
        pr, pi = pr * re - pi * im, pr * im + pi * re
    assert polys.eval_gauss(a, re, im) == (acc_re, acc_im)


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=5),
       st.integers(-40, 40), st.integers(0, 5))
def test_sign_at_dyadic_matches_eval(a, p, k):
    val = polys.eval_at([F(c) for c in a], F(p, 2**k))
    sign = (val > 0) - (val < 0)
    assert polys.sign_at_dyadic(a, p, k) == sign


def test_sturm_counts_on_known_cubic():
    f = [F(-1), F(-1), F(0), F(1)]  # one real root near 1.3247
    chain = polys.sturm_chain(f)
    assert polys.sturm_count(chain, F(-2), F(2)) == 1
    assert polys.sturm_count(chain, F(1), F(2)) == 1
    assert polys.sturm_count(chain, F(-2), F(1)) == 0


def test_sturm_counts_quadratics():
    two = polys.sturm_chain([F(-2), F(0), F(1)])
    assert polys.sturm_count(two, F(-2), F(2)) == 2
    assert polys.sturm_count(two, F(0), F(2)) == 1
    none = polys.sturm_chain([F(1), F(0), F(1)])
    assert polys.sturm_count(none, F(-10), F(10)) == 0


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=6).filter(
    lambda c: c[-1] != 0))
def test_cauchy_bound_captures_all_real_roots(c):
    f = [F(x) for x in c]
    bound = polys.cauchy_bound(f)
    chain = polys.sturm_chain(f)
    inside = polys.sturm_count(chain, -bound, bound)
    wide = polys.sturm_count(chain, F(-10**6), F(10**6))
    assert inside == wide


def test_resultant_known_values():
    f = [F(-1), F(-1), F(0), F(1)]
    # res(f, f') = 23 for x^3 - x - 1 (discriminant -23)
    assert polys.sylvester_resultant(f, polys.derivative(f)) == 23
    assert polys.sylvester_resultant([F(-2), F(0), F(1)], [F(-3), F(0), F(1)]) == 1
    # res(x - a, x - b) = b - a in the product convention
    assert polys.sylvester_resultant([F(-2), F(1)], [F(-3), F(1)]) == -1


@given(
    st.lists(fracs, min_size=1, max_size=3),
    st.lists(fracs, min_size=1, max_size=3),
    st.lists(fracs, min_size=1, max_size=3),
)
def test_resultant_multiplicative_in_second_argument(fa, ga, ha):
    # force nonzero leading coefficients by appending 1
    f = fa + [F(1)]
    g = ga + [F(1)]
    h = ha + [F(1)]
    lhs = polys.sylvester_resultant(f, polys.poly_mul(g, h))
    rhs = polys.sylvester_resultant(f, g) * polys.sylvester_resultant(f, h)
    assert lhs == rhs


def test_resultant_vanishes_on_shared_root():
    f = polys.poly_mul([F(-2), F(1)], [F(5), F(1)])   # roots 2, -5
    g = polys.poly_mul([F(-2), F(1)], [F(1), F(1)])   # roots 2, -1
    assert polys.sylvester_resultant(f, g) == 0


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-5, 5), min_size=n, max_size=n),
        min_size=n, max_size=n,
    )
))
def test_det_routes_agree(mat):
    as_frac = [[F(x) for x in row] for row in mat]
    assert polys.det_fraction(as_frac) == polys.det_int(mat)


def test_det_known_values():
    assert polys.det_int([[2, 0], [0, 3]]) == 6
    assert polys.det_fraction([[F(1, 2), F(1)], [F(1), F(1, 2)]]) == F(-3, 4)
    # singular
    assert polys.det_int([[1, 2], [2, 4]]) == 0


def test_newton_to_coeffs_known_root_sets():
    # roots {2, 3}: p1 = 5, p2 = 13 -> x^2 - 5x + 6
    assert polys.newton_to_coeffs([F(5), F(13)], 2) == [F(6), F(-5), F(1)]
    # triple root 1 -> (x - 1)^3
    assert polys.newton_to_coeffs([F(3), F(3), F(3)], 3) == [
        F(-1), F(3), F(-3), F(1)]


@given(poly_st, fracs, fracs)
def test_taylor_shift_evaluates_shifted(a, h, x):
    shifted = polys.taylor_shift(a, h)
    assert polys.eval_at(shifted, x) == polys.eval_at(a, x + h)


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4))
def test_sqrt_bounds_bracket(q):
    lo = polys.sqrt_down(q)
    hi = polys.sqrt_up(q)
    assert lo * lo <= q <= hi * hi
    assert lo <= hi


def test_sqrt_bounds_exact_on_squares():
    assert polys.sqrt_up(F(4)) == 2
    assert polys.sqrt_down(F(4)) == 2
    assert polys.sqrt_up(F(9, 16)) == F(3, 4)
    assert polys.sqrt_down(F(9, 16)) == F(3, 4)


@given(st.fractions(min_value=0, max_value=100, max_denominator=50))
def test_sqrt_bounds_width_bound(q):
    # bracket width is at most one part of the input denominator
    lo = polys.sqrt_down(q)
    hi = polys.sqrt_up(q)
    assert hi - lo <= F(1, q.denominator)
