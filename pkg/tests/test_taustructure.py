import pytest

from dkdv.algebra import ONE, w
from dkdv.diffop import kdv_flow
from dkdv.resolvent import mr_recursion
from dkdv.taustructure import (
    d2_check,
    derivation_correlator,
    kpoint_log_tau,
    omega,
    omega_table,
    reduced_two_point,
    solve_shift2_difference,
    verify_tau_structure,
)


def test_omega_one_one_via_telescoping_oracle():
    # the two-site increment of the (1,1) entry must be the first flow of
    # the shifted lower-left coefficient; telescoping solves it independently
    rs = mr_recursion(4)
    target = kdv_flow(1)(rs.c[1].shift(2))
    assert target == w(2) * w(1) - w(0) * w(-1)
    assert solve_shift2_difference(target) == w(0) * w(-1)
    assert omega(1, 1) == w(0) * w(-1)


def test_omega_symmetry_and_integrality():
    table = omega_table(6)
    for (i, j), v in table.items():
        assert v == table[(j, i)]
        assert v.is_integral()
        assert v.constant_term() == 0


def test_omega_telescoping_oracle_higher_index():
    rs = mr_recursion(6)
    target = kdv_flow(2)(rs.c[1].shift(2))
    assert solve_shift2_difference(target) == omega(1, 2)


def test_increment_relation():
    assert d2_check(4).passed


def test_flow_symmetry_of_table():
    table = omega_table(5)
    d1, d2 = kdv_flow(1), kdv_flow(2)
    assert d2(table[(1, 1)]) == d1(table[(1, 2)])
    assert d2(table[(2, 1)]) == d1(table[(2, 2)])


def test_three_point_formula():
    out = kpoint_log_tau(3, 6, weight=4)
    d1 = kdv_flow(1)
    assert out[(1, 1, 1)] == d1(omega(1, 1))
    assert out[(1, 1, 1)] == w(0) * w(-1) * (w(1) + w(0) - w(-1) - w(-2))
    assert out[(1, 1, 2)] == kdv_flow(2)(omega(1, 1))
    assert out[(1, 1, 2)] == d1(omega(1, 2))
    # permutation symmetry
    assert out[(1, 2, 1)] == out[(1, 1, 2)] == out[(2, 1, 1)]


def test_derivation_correlator_matches_three_point():
    out = kpoint_log_tau(3, 6, weight=4)
    assert derivation_correlator([1, 1, 1]) == out[(1, 1, 1)]
    assert derivation_correlator([2, 1, 1]) == out[(1, 1, 2)]


def test_reduced_two_point_values():
    T = reduced_two_point(5)
    assert T.coeff((-2, -2)) == w(1) * w(0) + w(0) * w(-1)
    assert T.coeff((-2, -3)) == T.coeff((-3, -2))
    table = omega_table(5)
    for i in range(1, 4):
        for j in range(1, 5 - i):
            assert T.coeff((-i - 1, -j - 1)) == \
                table[(i, j)] + table[(i, j)].shift(1)


def test_omega_needs_enough_depth():
    from dkdv.algebra import SeriesDepthError

    with pytest.raises(SeriesDepthError):
        omega(4, 4, J=3)


def test_telescoping_rejects_constants():
    with pytest.raises(ArithmeticError):
        solve_shift2_difference(ONE + w(0) - w(0))


def test_telescoping_rejects_unsolvable():
    with pytest.raises(ArithmeticError):
        solve_shift2_difference(w(0))


def test_full_tau_suite_small():
    assert verify_tau_structure(weight=6, flow_max=2).passed
