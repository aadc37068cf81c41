from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dkdv.algebra import (
    EPS,
    LOGX,
    LaurentSeries,
    MultiSeries,
    NotCleanlyDivisible,
    ONE,
    SeriesDepthError,
    X,
    ZERO,
    ZP,
    divide_by_sq_diff,
    poly,
    poly_shift,
    w,
)

# ---------------------------------------------------------------------------
# polynomial strategies
# ---------------------------------------------------------------------------
coeffs = st.one_of(
    st.integers(min_value=-9, max_value=9),
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
)
gens = st.one_of(
    st.integers(min_value=-3, max_value=3).map(w),
    st.sampled_from([X, EPS, LOGX, ZP]),
)


@st.composite
def polys(draw):
    n_terms = draw(st.integers(min_value=0, max_value=4))
    p = ZERO
    for _ in range(n_terms):
        c = draw(coeffs)
        term = poly(c)
        for _ in range(draw(st.integers(min_value=0, max_value=3))):
            term = term * draw(gens)
        p = p + term
    return p


@st.composite
def lattice_polys(draw):
    n_terms = draw(st.integers(min_value=0, max_value=4))
    p = ZERO
    for _ in range(n_terms):
        term = poly(draw(st.integers(min_value=-9, max_value=9)))
        for _ in range(draw(st.integers(min_value=0, max_value=3))):
            term = term * w(draw(st.integers(min_value=-3, max_value=3)))
        p = p + term
    return p


# ---------------------------------------------------------------------------
# grammar and shifts
# ---------------------------------------------------------------------------
def test_text_grammar_example():
    p = 3 * w(0) ** 2 * w(-1) - X * Fraction(1, 2)
    assert p.to_text() == "3*w[0]^2*w[-1] + -1/2*x"


def test_text_zero_and_constants():
    assert ZERO.to_text() == "0"
    assert poly(Fraction(-7, 3)).to_text() == "-7/3"
    assert (w(1) * w(0)).to_text() == "w[1]*w[0]"


def test_shift_examples():
    assert poly_shift(w(0) * w(-1), 1) == w(1) * w(0)
    p = 2 * w(1) * X - w(0)
    assert poly_shift(p, 0) == p
    assert poly_shift(w(1) + w(0), -1) == w(0) + w(-1)


def test_shift_fixes_symbols():
    p = X + EPS + LOGX + ZP
    assert poly_shift(p, 5) == p


@given(p=lattice_polys(), d1=st.integers(-3, 3), d2=st.integers(-3, 3))
def test_shift_composition(p, d1, d2):
    assert poly_shift(poly_shift(p, d1), d2) == poly_shift(p, d1 + d2)


@given(p=lattice_polys(), q=lattice_polys(), d=st.integers(-3, 3))
def test_shift_is_multiplicative(p, q, d):
    assert poly_shift(p * q, d) == poly_shift(p, d) * poly_shift(q, d)


@given(p=polys(), q=polys(), r=polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p + ZERO == p
    assert p * ONE == p
    assert p - p == ZERO


@given(p=polys())
def test_integrality_predicate(p):
    halves = p * Fraction(1, 2)
    if p.is_zero():
        assert halves.is_integral()
    doubled = halves * 2
    assert doubled == p


def test_eval_and_split():
    from dkdv.algebra import EPS_RANK, X_RANK

    p = 3 * X ** 2 * EPS - EPS + poly(5)
    by_eps = p.split_by(EPS_RANK)
    assert by_eps[0] == poly(5)
    assert by_eps[1] == 3 * X ** 2 - 1
    assert p.eval_at({(X_RANK, 0): 2, (EPS_RANK, 0): 1}) == 16


def test_derivative():
    p = w(0) ** 3 * w(1) + 2 * w(1)
    assert p.diff_gen(0, 0) == 3 * w(0) ** 2 * w(1)
    assert p.diff_gen(0, 1) == w(0) ** 3 + poly(2)
    assert p.diff_gen(0, 5) == ZERO


# ---------------------------------------------------------------------------
# one-variable series
# ---------------------------------------------------------------------------
def lam(p=1):
    return LaurentSeries.lam(p)


def test_series_mul_examples():
    from dkdv.algebra import series_mul

    inv = lam(-1)
    assert series_mul(inv, inv).coeff(-2) == ONE
    assert (inv * inv).coeff(-2) == ONE
    s = LaurentSeries({0: ONE, -1: w(0)}, low=-3)
    t = LaurentSeries({0: ONE, -1: -w(0)}, low=-3)
    prod = s * t
    assert prod.coeff(0) == ONE
    assert prod.coeff(-1) == ZERO
    assert prod.coeff(-2) == -(w(0) ** 2)
    u = LaurentSeries({1: ONE, -1: w(0)}, low=-4)
    prod2 = u * lam(-1)
    assert prod2.coeff(0) == ONE
    assert prod2.coeff(-2) == w(0)


def test_series_depth_tracking():
    s = LaurentSeries({-1: ONE}, low=-3, pmax=-1)   # known through power -3
    t = LaurentSeries({-1: ONE}, low=-5, pmax=-1)
    prod = s * t
    assert prod.low == -4  # -3 + (-1): the shallower factor limits the depth
    assert prod.coeff(-4) == ZERO
    with pytest.raises(SeriesDepthError):
        prod.coeff(-5)


def test_series_plus_part_and_powers():
    s = LaurentSeries({2: ONE, 0: w(0), -1: w(1)}, low=-2)
    plus = s.plus_part()
    assert plus.coeff(2) == ONE and plus.coeff(0) == w(0)
    assert plus.coeff(-1) == ZERO and plus.low is None
    sq = s.subs_lam_squared()
    assert sq.coeff(4) == ONE and sq.coeff(-2) == w(1)
    neg = s.subs_lam_negated()
    assert neg.coeff(2) == ONE and neg.coeff(-1) == -w(1)


# ---------------------------------------------------------------------------
# bi-series and the squared-difference division
# ---------------------------------------------------------------------------
def _exact_biseries(entries):
    return MultiSeries(2, entries, (None, None), None,
                       tuple(max(k[i] for k in entries) for i in (0, 1)),
                       max(sum(k) for k in entries))


def test_divide_roundtrip():
    # (lam - mu)^2 / (lam^2 mu^2) divided back out
    sq = {(0, -2): ONE, (-1, -1): poly(-2), (-2, 0): ONE}
    S = _exact_biseries(sq)
    T = divide_by_sq_diff(S, floor0=-6)
    assert T.coeff((-2, -2)) == ONE
    for key, v in T.c.items():
        if key != (-2, -2):
            assert v.is_zero(), key
    # multiply back within the window
    back = T.mul(_exact_biseries(
        {(2, 0): ONE, (1, 1): poly(-2), (0, 2): ONE}))
    assert back.coeff((0, -2)) == ONE
    assert back.coeff((-1, -1)) == poly(-2)
    assert back.coeff((-2, 0)) == ONE


def test_divide_rejects_constant():
    S = _exact_biseries({(0, 0): ONE})
    with pytest.raises(NotCleanlyDivisible):
        divide_by_sq_diff(S, floor0=-4)


def test_multiseries_symmetry_helpers():
    S = _exact_biseries({(-2, -3): w(0), (-3, -2): w(1)})
    P = S.permute_vars((1, 0))
    assert P.coeff((-3, -2)) == w(0)
    assert P.coeff((-2, -3)) == w(1)
