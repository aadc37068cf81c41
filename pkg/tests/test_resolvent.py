import pytest

from dkdv.algebra import ONE, ZERO, w
from dkdv.resolvent import (
    RecursionInconsistent,
    ResolventSeries,
    _crosscheck_mr2,
    assemble_resolvent,
    crosscheck_operator,
    lax_matrix,
    mr_recursion,
    toda_reduced_series,
    verify_resolvent_equations,
    verify_toda_identities,
    verify_zero_curvature,
)


def test_first_coefficients():
    rs = mr_recursion(2)
    assert rs.a[0] == ZERO and rs.c[0] == ONE
    assert rs.c[1] == w(-1) + w(-2)
    assert rs.a[1] == w(0) * w(-1)
    assert rs.c[2] == (w(-1) + w(-2)) ** 2 + w(0) * w(-1) + w(-2) * w(-3)


def test_recursion_extends_stably():
    lo = mr_recursion(4)
    hi = mr_recursion(7)
    assert all(lo.a[j] == hi.a[j] for j in range(5))
    assert all(lo.c[j] == hi.c[j] for j in range(5))


def test_integrality():
    rs = mr_recursion(6)
    assert all(p.is_integral() for p in rs.a)
    assert all(p.is_integral() for p in rs.c)


def test_displayed_leading_entries():
    R = assemble_resolvent(mr_recursion(3), 0)
    assert R.a11.coeff(0) == ONE
    assert R.a11.coeff(-1) == ZERO
    assert R.a11.coeff(-2) == w(-1) * w(0)
    assert R.a21.coeff(-1) == ONE
    assert R.a21.coeff(-2) == w(-2) + w(-1)
    assert R.a12.coeff(-1) == -(w(0) * w(-1))
    assert R.a12.coeff(-2) == -(w(0) + w(1)) * w(0) * w(-1)
    assert R.a22.coeff(-2) == -(w(-1) * w(0))


def test_defining_equations_and_intertwining():
    assert verify_resolvent_equations(5).passed


def test_crosscheck_against_operator_coefficients():
    assert crosscheck_operator(6).passed


def test_corrupted_recursion_is_detected():
    rs = mr_recursion(3)
    bad = ResolventSeries(rs.a[:3] + (rs.a[3] + w(0),), rs.c)
    with pytest.raises(RecursionInconsistent):
        _crosscheck_mr2(bad)


def test_lax_matrix_first_flow():
    lm = lax_matrix(1, mr_recursion(2))
    assert lm.mat.a11.coeff(1) == ONE and lm.mat.a11.coeff(0) == ZERO
    assert lm.mat.a21.coeff(0) == ONE
    assert lm.mat.a22.coeff(0) == w(-1) + w(-2)
    assert lm.mat.a12.coeff(0) == -(w(0) * w(-1))


def test_zero_curvature():
    assert verify_zero_curvature(2).passed


def test_reduced_series_leading_terms():
    A, G = toda_reduced_series(5)
    assert G.coeff(-1) == ONE
    assert A.coeff(-2) == w(0)
    assert G.coeff(-3) == w(0) + w(-1)
    # parity is structural: only even powers in the diagonal series
    assert all(p % 2 == 0 for p in A.c)
    assert all(p % 2 == 1 for p in G.c)


def test_reduced_lowerleft_matches_squared_gamma():
    # the lower-left series is the odd dressing of the one-field lower series
    rs = mr_recursion(3)
    _, G = toda_reduced_series(7)
    g_sq = rs.gamma(1).subs_lam_squared().mul_lam_power(1)
    for p in range(-7, 0):
        if g_sq.valid_at(p) and G.valid_at(p):
            assert G.coeff(p) == g_sq.coeff(p), p


def test_toda_identity_suite():
    assert verify_toda_identities(5).passed
