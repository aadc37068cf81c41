import pytest

from dkdv.algebra import X_RANK, x_pow
from dkdv.oracle import (
    TooLarge,
    census,
    connected_cumulant,
    direct_expectation,
    wick_moment,
)


def test_full_moments():
    assert wick_moment([2]) == x_pow(2)
    assert wick_moment([4]) == 2 * x_pow(3) + x_pow(1)
    assert wick_moment([2, 2]) == x_pow(4) + 2 * x_pow(2)


def test_connected_cumulants():
    assert connected_cumulant([2, 2]) == 2 * x_pow(2)
    assert connected_cumulant([4]) == wick_moment([4])
    assert connected_cumulant([2, 2, 2]) == 8 * x_pow(2)


def test_census_counts():
    c4 = census([4])
    assert c4.by_genus == {0: 2, 1: 1}
    assert c4.a_values() == {0: 2, 1: 1}
    c22 = census([2, 2])
    assert c22.by_genus == {0: 2}
    assert c22.a_values() == {0: 1}
    assert census([2]).a_values() == {0: 1}


def test_census_matches_cumulant_grading():
    # per-genus counts reassemble the connected cumulant exactly
    for vs in ([4], [6], [2, 4], [2, 2, 2]):
        cen = census(vs)
        k = len(vs)
        tj = sum(vs) // 2
        poly = sum((n * x_pow(2 - 2 * g - k + tj) for g, n in cen.by_genus.items()),
                   x_pow(1) * 0)
        assert poly == connected_cumulant(vs)


def test_direct_index_summation_agrees():
    for vs in ([2], [4], [2, 2], [6]):
        wm = wick_moment(vs)
        for n in (1, 2, 3):
            assert direct_expectation(vs, n) == wm.eval_at({(X_RANK, 0): n})


def test_enumeration_bound():
    with pytest.raises(TooLarge):
        wick_moment([18])
    with pytest.raises(ValueError):
        wick_moment([3])


def test_twelve_halfedge_case():
    # the largest single-trace case used downstream: 10395 gluings
    p = connected_cumulant([12])
    assert p.coeff((((X_RANK, 0), 7),)) == 132  # planar count is Catalan
    total = sum(census([12]).by_genus.values())
    assert total == 10395
