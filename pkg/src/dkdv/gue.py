"""Closed-form matrix-model correlators and the genus expansions hung off
them: the explicit hypergeometric resolvent, one/two/k-point correlators in
the matrix size, per-genus extraction, the Bernoulli-kernel split of the
partition function, half-step modified correlators, and the linear relations
that pin the special cubic Hodge numbers.

Conventions: the matrix size is the symbol x; the spectral weight at
lambda^-(j+1) carries the trace of the 2j-th power, so all correlator
gradings share one indexing.  eps is the genus-counting parameter and may
appear with negative exponents; logx and zp stay symbolic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    Coeff,
    EPS,
    EPS_RANK,
    LOGX,
    LOGX_RANK,
    LaurentSeries,
    Matrix2,
    MultiSeries,
    ONE,
    SitePolynomial,
    X,
    X_RANK,
    ZERO,
    ZP,
    divide_by_sq_diff,
    eps_pow,
    x_pow,
)
from .reports import Check, Report
from .taustructure import cyclic_sum_coefficients, derivation_correlator

__all__ = [
    "NonTruncating",
    "SpecializationMismatch",
    "UnexpectedPowers",
    "OddPowerPresent",
    "InconsistentSystem",
    "GueResolvent",
    "HodgeTable",
    "bernoulli_numbers",
    "hypergeom_trunc",
    "gue_resolvent",
    "b_normalization_report",
    "one_point",
    "one_point_poly",
    "two_point",
    "two_point_poly",
    "k_point",
    "correlator_poly",
    "correlator_table",
    "extract_ag",
    "e_series",
    "b_series",
    "modified_correlators",
    "hodge_free_series",
    "solve_H_numbers",
]


class NonTruncating(Exception):
    """Hypergeometric truncation needs a nonpositive integer first argument."""


class SpecializationMismatch(Exception):
    """The explicit resolvent disagrees with the recursion at w[k] = x+k."""


class UnexpectedPowers(Exception):
    """A correlator polynomial carries powers outside the genus grading."""


class OddPowerPresent(Exception):
    """A modified correlator failed the evenness-in-eps assertion."""


class InconsistentSystem(Exception):
    """The overdetermined Hodge-number system has a nonzero residual."""


# ---------------------------------------------------------------------------
# small exact number theory
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> Tuple[Coeff, ...]:
    """B_0..B_n with B_1 = -1/2, via the binomial recurrence."""
    out: List[Coeff] = [1]
    for m in range(1, n + 1):
        s = Fraction(0)
        for j in range(m):
            s += math.comb(m + 1, j) * Fraction(out[j])
        b = -s / (m + 1)
        out.append(b.numerator if b.denominator == 1 else b)
    return tuple(out)


def _bern(i: int) -> Coeff:
    return bernoulli_numbers(i)[i]


def _gbinom(d: int, m: int) -> Coeff:
    """Generalized binomial coefficient C(d, m) for integer d (any sign)."""
    num = 1
    for i in range(m):
        num *= d - i
    v = Fraction(num, math.factorial(m))
    return v.numerator if v.denominator == 1 else v


# ---------------------------------------------------------------------------
# truncating hypergeometric sums
# ---------------------------------------------------------------------------
def hypergeom_trunc(a: int, bpoly, c: int, z: Coeff) -> SitePolynomial:
    """The Gauss hypergeometric sum, truncated through its first argument.

    The second argument may be a polynomial (it enters through rising
    factorials); the result is exact.  The sum is symmetric in its first two
    arguments, so integer-b truncation is available by swapping.
    """
    if a > 0:
        raise NonTruncating("first argument must be a nonpositive integer")
    if not isinstance(bpoly, SitePolynomial):
        bpoly = SitePolynomial.const(bpoly)
    if c <= 0:
        raise ValueError("third argument must be a positive integer")
    total = ONE
    term = ONE
    for m in range(1, -a + 1):
        # term_m = term_{m-1} * (a+m-1)(b+m-1)/( (c+m-1) m ) * z
        factor = Fraction(z) * (a + m - 1) / ((c + m - 1) * m)
        term = term * (bpoly + (m - 1)) * factor
        total = total + term
    return total


def _double_factorial_odd(j: int) -> int:
    """(2j-1)!! with the empty product at j = 0."""
    out = 1
    for i in range(1, 2 * j, 2):
        out *= i
    return out


# ---------------------------------------------------------------------------
# the explicit resolvent
# ---------------------------------------------------------------------------
def _A_coeff(npoly: SitePolynomial, j: int) -> SitePolynomial:
    return (npoly - 1) * hypergeom_trunc(-j, 2 - npoly, 2, 2)


def _B_coeff(npoly: SitePolynomial, j: int) -> SitePolynomial:
    # the j = 0 instance does not truncate; the resolvent normalization
    # forces it to 1, which the integer-point identity check confirms
    if j == 0:
        return ONE
    return ((npoly - 1) * hypergeom_trunc(1 - j, 2 - npoly, 2, 2)
            + (npoly - 2) * hypergeom_trunc(1 - j, 3 - npoly, 2, 2))


@dataclass(frozen=True)
class GueResolvent:
    """Per-power 2x2 coefficient matrices of the explicit resolvent."""

    order: int
    diag: Tuple[SitePolynomial, ...]       # coefficient of the (1,1) series tail
    upper: Tuple[SitePolynomial, ...]
    lower: Tuple[SitePolynomial, ...]

    def matrix(self, x_shift: int = 0) -> Matrix2:
        """As a series matrix; optionally with x translated by an integer."""
        J = self.order
        sub = (lambda p: p.subs_gen(X_RANK, 0, X + x_shift)) if x_shift else (lambda p: p)
        al = LaurentSeries({-j - 1: sub(self.diag[j]) for j in range(J + 1)},
                           low=-J - 1, pmax=-1)
        be = LaurentSeries({-j - 1: sub(self.upper[j]) for j in range(J + 1)},
                           low=-J - 1, pmax=-1)
        ga = LaurentSeries({-j - 1: sub(self.lower[j]) for j in range(J + 1)},
                           low=-J - 1, pmax=-1)
        return Matrix2(LaurentSeries({0: ONE}) + al, be, ga, -al)


@lru_cache(maxsize=8)
def gue_resolvent(J: int) -> GueResolvent:
    """Assemble the explicit resolvent and certify it against the recursion
    specialized at w[k] = x + k (the lattice initial data of the model)."""
    if J < 1:
        raise ValueError("order must be >= 1")
    diag, upper, lower = [], [], []
    for j in range(J + 1):
        pref = _double_factorial_odd(j)
        A = _A_coeff(X, j)
        B = _B_coeff(X, j)
        B2 = _B_coeff(X + 2, j)
        diag.append(pref * ((2 * j + 1) * A - (X - 1) * B))
        upper.append(pref * (X - X * X) * B2)
        lower.append(pref * B)
    res = GueResolvent(J, tuple(diag), tuple(upper), tuple(lower))
    _certify_specialization(res)
    return res


def _certify_specialization(res: GueResolvent) -> None:
    from .resolvent import mr_recursion

    rs = mr_recursion(res.order)
    for j in range(res.order + 1):
        da = res.diag[j] - rs.a[j].subs_w_affine()
        dc = res.lower[j] - rs.c[j].subs_w_affine()
        db = res.upper[j] + (X * (X - 1)) * rs.c[j].shift(2).subs_w_affine()
        for name, d in (("diagonal", da), ("lower", dc), ("upper", db)):
            if not d.is_zero():
                raise SpecializationMismatch(
                    f"{name} coefficient at depth {j} differs by {d.to_text()}")


def b_normalization_report(n_max: int = 20) -> Report:
    """The depth-zero normalization identity at integer sizes 2..n_max,
    evaluated through second-argument truncation (argument symmetry)."""
    checks = []
    for n in range(2, n_max + 1):
        val = (n - 1) * hypergeom_trunc(2 - n, 1, 2, 2)
        if n > 2:  # at n = 2 the second addend has a vanishing prefactor
            val = val + (n - 2) * hypergeom_trunc(3 - n, 1, 2, 2)
        ok = val == ONE
        checks.append(Check(f"depth0-normalization[n={n}]", None,
                            "pass" if ok else "fail",
                            None if ok else val.to_text()))
    return Report("depth0-normalization", checks)


# ---------------------------------------------------------------------------
# correlators in the matrix size
# ---------------------------------------------------------------------------
@lru_cache(maxsize=64)
def one_point_poly(j: int) -> SitePolynomial:
    """The connected single-trace average of the 2j-th power, in x."""
    if j < 1:
        raise ValueError("index must be >= 1")
    val = hypergeom_trunc(-j, -X, 2, 2) - j * hypergeom_trunc(1 - j, 1 - X, 3, 2)
    return _double_factorial_odd(j) * X * val


def one_point(J: int) -> List[SitePolynomial]:
    return [one_point_poly(j) for j in range(1, J + 1)]


@lru_cache(maxsize=8)
def _gue_pair_series(J: int) -> MultiSeries:
    """The divided pair-trace series of the explicit resolvent (one site)."""
    R = gue_resolvent(J).matrix()
    al, be, ga = R.a11 - LaurentSeries({0: ONE}), R.a12, R.a21
    aL = MultiSeries.from_series(al, 0, 2)
    aM = MultiSeries.from_series(al, 1, 2)
    S = (aL + aM + 2 * (aL * aM)
         + MultiSeries.from_series(be, 0, 2) * MultiSeries.from_series(ga, 1, 2)
         + MultiSeries.from_series(ga, 0, 2) * MultiSeries.from_series(be, 1, 2))
    return divide_by_sq_diff(S)


def _x_shift(p: SitePolynomial, d: int = 1) -> SitePolynomial:
    return p.subs_gen(X_RANK, 0, X + d)


def two_point_poly(j1: int, j2: int, J: Optional[int] = None) -> SitePolynomial:
    """The connected two-trace average; site-summed pair series coefficient."""
    if J is None:
        J = j1 + j2 + 3
    c = _gue_pair_series(J).coeff((-j1 - 1, -j2 - 1))
    return c + _x_shift(c)


def two_point(J: int) -> Dict[Tuple[int, int], SitePolynomial]:
    out = {}
    for j1 in range(1, J):
        for j2 in range(1, J + 1 - j1):
            out[(j1, j2)] = two_point_poly(j1, j2, J + 2)
    return out


@lru_cache(maxsize=16)
def k_point(k: int, weight: int, J: Optional[int] = None) -> Dict[Tuple[int, ...], SitePolynomial]:
    """Connected k-trace averages via the cyclic-sum formula, k >= 3.

    Returns {(j_1..j_k): polynomial in x} for all tuples with sum <= weight;
    cached, treat as read-only.
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    if J is None:
        J = weight + 2
    R = gue_resolvent(J).matrix()
    targets = [tuple(-j - 1 for j in js)
               for js in itertools.product(range(1, weight + 1), repeat=k)
               if sum(js) <= weight]
    raw = cyclic_sum_coefficients([R] * k, targets)
    out = {}
    for t, v in raw.items():
        js = tuple(-q - 1 for q in t)
        out[js] = v + _x_shift(v)
    return out


@lru_cache(maxsize=256)
def correlator_poly(valencies: Tuple[int, ...]) -> SitePolynomial:
    """The connected correlator for one valency multiset, routed by k.

    Single and double traces use the closed forms; triples use the cyclic-sum
    formula; higher k uses flow derivatives of the tau-structure specialized
    at the lattice initial data (the cheap route; the k = 3 agreement between
    the two routes is tested).
    """
    vs = tuple(sorted(valencies))
    if not vs or any(v <= 0 or v % 2 for v in vs):
        raise ValueError("valencies must be positive even integers")
    js = tuple(v // 2 for v in vs)
    k = len(js)
    if k == 1:
        return one_point_poly(js[0])
    if k == 2:
        return two_point_poly(js[0], js[1])
    if k == 3:
        return k_point(3, sum(js))[js]
    om = derivation_correlator(list(js))
    c = om.subs_w_affine()
    return c + _x_shift(c)


def correlator_table(multisets: Sequence[Sequence[int]]) -> Dict[tuple, dict]:
    """Batch of correlators with their per-genus counts, JSON-ready values."""
    out = {}
    for vs in multisets:
        key = tuple(sorted(vs))
        p = correlator_poly(key)
        out[key] = {
            "valencies": list(key),
            "poly": p.to_text(),
            "by_genus": {str(g): str(a) for g, a in sorted(extract_ag(key, p).items())},
        }
    return out


def extract_ag(valencies: Sequence[int],
               poly: Optional[SitePolynomial] = None) -> Dict[int, Coeff]:
    """Per-genus counts from the x-grading of a connected correlator.

    The x-power of the genus-g stratum is 2 - 2g - k + |j|; any power off
    that ladder raises, and the counts come back over k factorial.
    """
    vs = tuple(sorted(valencies))
    if poly is None:
        poly = correlator_poly(vs)
    k = len(vs)
    total_j = sum(vs) // 2
    kfact = math.factorial(k)
    out: Dict[int, Coeff] = {}
    for d, cof in sorted(poly.split_by(X_RANK).items(), reverse=True):
        c = cof.constant_term()
        if not (cof == SitePolynomial.const(c)):
            raise UnexpectedPowers(f"non-constant cofactor at x^{d}")
        if not isinstance(c, int):
            raise UnexpectedPowers(f"non-integer gluing count {c} at x^{d}")
        num = 2 - k + total_j - d
        if num % 2 or num < 0:
            raise UnexpectedPowers(f"power x^{d} is off the genus ladder")
        g = num // 2
        a = Fraction(c, kfact)
        if a < 0:
            raise UnexpectedPowers(f"negative count at genus {g}")
        out[g] = a.numerator if a.denominator == 1 else a
    return out


# ---------------------------------------------------------------------------
# partition-function expansions
# ---------------------------------------------------------------------------
def e_series(valencies: Sequence[int]) -> SitePolynomial:
    """Genus expansion of one derivative of the full free energy (k >= 1)."""
    vs = tuple(sorted(valencies))
    k = len(vs)
    total_j = sum(vs) // 2
    kfact = math.factorial(k)
    out = ZERO
    for g, a in extract_ag(vs).items():
        h = 2 - 2 * g - k + total_j
        out = out + (kfact * a) * x_pow(h) * eps_pow(2 * g - 2)
    return out


def b_series(valencies: Sequence[int], eps_order: int = 8) -> SitePolynomial:
    """One derivative of the half-lattice free energy (k >= 1), or its
    derivative-free part for the empty multiset (truncated in eps)."""
    vs = tuple(sorted(valencies))
    if not vs:
        return b_series_empty(eps_order)
    k = len(vs)
    total_j = sum(vs) // 2
    kfact = math.factorial(k)
    out = ZERO
    for g, a in extract_ag(vs).items():
        h = 2 - 2 * g - k + total_j
        for ell in range(h + 1):
            coeff = (Fraction(_bern(ell + 1), ell + 1) * math.comb(h, ell)
                     * (1 - 2 ** (ell + 1)) * Fraction(a) * kfact)
            if coeff:
                out = out + coeff * x_pow(h - ell) * eps_pow(2 * g - 2 + ell)
    return out


def _p_tail_coeff(p: int) -> Coeff:
    """The weight of eps^p x^-p in the derivative-free expansion."""
    s = Fraction(0)
    for g in range(0, (p + 2) // 2 + 1):
        m = p + 3 - 2 * g
        if m < 0:
            continue
        s += (Fraction((2 * g - 1) * (1 - 2 ** m)) * Fraction(_bern(m))
              * Fraction(_bern(2 * g)) / (math.factorial(m) * math.factorial(2 * g)))
    v = s * (-1) ** p * math.factorial(p - 1)
    return v.numerator if v.denominator == 1 else v


def b_series_empty(eps_order: int) -> SitePolynomial:
    """The derivative-free half-lattice free energy through an eps order.

    The constant stratum carries half the zeta constant, no bare rational,
    and -logx/24: the doubling identity e(x) = b(x) + b(x+eps) pins it, since
    the zeta coefficient must double to one and no lone rational may survive.
    """
    out = (Fraction(1, 4) * LOGX - Fraction(3, 8)) * x_pow(2) * eps_pow(-2)
    out = out + Fraction(1, 4) * (ONE - LOGX) * X * eps_pow(-1)
    out = out + Fraction(1, 24) * (12 * ZP - LOGX)
    for p in range(1, eps_order + 1):
        c = _p_tail_coeff(p)
        if c:
            out = out + c * eps_pow(p) * x_pow(-p)
    return out


def e_series_empty(eps_order: int) -> SitePolynomial:
    """The derivative-free full free energy through an eps order."""
    out = Fraction(1, 2) * x_pow(2) * eps_pow(-2) * (LOGX - Fraction(3, 2))
    out = out - Fraction(1, 12) * LOGX + ZP
    g = 2
    while 2 * g - 2 <= eps_order:
        c = Fraction(_bern(2 * g), 4 * g * (g - 1))
        out = out + c * eps_pow(2 * g - 2) * x_pow(2 - 2 * g)
        g += 1
    return out


# -- eps-expansion helpers ---------------------------------------------------
def _log_one_plus(t_num: SitePolynomial, order: int) -> SitePolynomial:
    """log(1 + t) through total eps-order ``order`` for t a multiple of eps."""
    out = ZERO
    tp = ONE
    for m in range(1, order + 1):
        tp = tp * t_num
        out = out + Fraction((-1) ** (m + 1), m) * tp
    return out


def shift_x_by_eps(p: SitePolynomial, eps_order: int) -> SitePolynomial:
    """Substitute x -> x + eps, expanding negative x-powers and logx as
    series; exact through total eps-order ``eps_order``."""
    out = ZERO
    for d, cof in p.split_by(X_RANK).items():
        for le, cof2 in cof.split_by(LOGX_RANK).items():
            if le not in (0, 1):
                raise ValueError("only first powers of logx are expandable")
            base_eps = min((sum(e for (r, _), e in m if r == EPS_RANK)
                            for m in cof2.terms), default=0)
            budget = eps_order - base_eps
            # (x+eps)^d
            if d >= 0:
                xe = ZERO
                for m in range(d + 1):
                    xe = xe + _gbinom(d, m) * x_pow(d - m) * eps_pow(m)
            else:
                xe = ZERO
                for m in range(max(budget, 0) + 1):
                    xe = xe + _gbinom(d, m) * x_pow(d - m) * eps_pow(m)
            term = cof2 * xe
            if le:
                # log(x+eps) = logx + log(1 + eps/x)
                lg = LOGX + _log_one_plus(EPS * x_pow(-1), max(budget, 0))
                term = term * lg
            out = out + term
    return _truncate_eps(out, eps_order)


def subs_x_one_plus_half_eps(p: SitePolynomial, eps_order: int) -> SitePolynomial:
    """Substitute x -> 1 + eps/2, expanding negative powers and logx."""
    half_eps = Fraction(1, 2) * EPS
    out = ZERO
    for d, cof in p.split_by(X_RANK).items():
        for le, cof2 in cof.split_by(LOGX_RANK).items():
            if le not in (0, 1):
                raise ValueError("only first powers of logx are expandable")
            base_eps = min((sum(e for (r, _), e in m if r == EPS_RANK)
                            for m in cof2.terms), default=0)
            budget = max(eps_order - base_eps, 0)
            if d >= 0:
                xe = (ONE + half_eps) ** d
            else:
                xe = ZERO
                for m in range(budget + 1):
                    xe = xe + _gbinom(d, m) * Fraction(1, 2 ** m) * eps_pow(m)
            term = cof2 * xe
            if le:
                term = term * _log_one_plus(half_eps, budget)
            out = out + term
    return _truncate_eps(out, eps_order)


def _truncate_eps(p: SitePolynomial, eps_order: int) -> SitePolynomial:
    out = ZERO
    for e, cof in p.split_by(EPS_RANK).items():
        if e <= eps_order:
            out = out + cof * eps_pow(e)
    return out


# ---------------------------------------------------------------------------
# modified (half-step) correlators
# ---------------------------------------------------------------------------
def _modified_matrix(J: int) -> Matrix2:
    """The explicit resolvent at size (x + eps/2)/eps and argument lambda/eps."""
    res = gue_resolvent(J)
    repl = X * eps_pow(-1) + Fraction(1, 2)

    def build(coeffs: Sequence[SitePolynomial]) -> LaurentSeries:
        out = {}
        for j in range(J + 1):
            v = coeffs[j].subs_gen(X_RANK, 0, repl) * eps_pow(j + 1)
            if v:
                # Laurent sanity: the size-degree of the depth-j coefficient
                # is at most j+2 (j+1 on the diagonal), so at most one
                # inverse power of the expansion parameter survives
                for m in v.terms:
                    for (r, _), e in m:
                        if r == EPS_RANK and e < -1:
                            raise UnexpectedPowers(
                                "half-step substitution left an eps denominator "
                                f"of order {e} at depth {j}")
                out[-j - 1] = v
        return LaurentSeries(out, low=-J - 1, pmax=-1)

    al = build(res.diag)
    be = build(res.upper)
    ga = build(res.lower)
    return Matrix2(LaurentSeries({0: ONE}) + al, be, ga, -al)


def modified_correlators(k: int, weight: int, J: Optional[int] = None
                         ) -> Dict[Tuple[int, ...], SitePolynomial]:
    """Half-step-shifted correlators, Laurent polynomials in eps, even in eps.

    Keys are index tuples (i_1..i_k) with sum <= weight; evenness in eps is
    asserted on every output.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if J is None:
        J = weight + 3
    M = _modified_matrix(J)
    out: Dict[Tuple[int, ...], SitePolynomial] = {}
    if k == 2:
        al = M.a11 - LaurentSeries({0: ONE})
        aL = MultiSeries.from_series(al, 0, 2)
        aM = MultiSeries.from_series(al, 1, 2)
        S = (aL + aM + 2 * (aL * aM)
             + MultiSeries.from_series(M.a12, 0, 2) * MultiSeries.from_series(M.a21, 1, 2)
             + MultiSeries.from_series(M.a21, 0, 2) * MultiSeries.from_series(M.a12, 1, 2))
        T = divide_by_sq_diff(S)
        for i1 in range(1, weight):
            for i2 in range(1, weight + 1 - i1):
                out[(i1, i2)] = T.coeff((-i1 - 1, -i2 - 1)) * eps_pow(-2)
    else:
        targets = [tuple(-i - 1 for i in idx)
                   for idx in itertools.product(range(1, weight + 1), repeat=k)
                   if sum(idx) <= weight]
        raw = cyclic_sum_coefficients([M] * k, targets)
        for t, v in raw.items():
            idx = tuple(-q - 1 for q in t)
            out[idx] = v * eps_pow(-k)
    for idx, v in out.items():
        for e in v.split_by(EPS_RANK):
            if e % 2:
                raise OddPowerPresent(f"odd eps power {e} at index {idx}")
    return out


# ---------------------------------------------------------------------------
# Hodge-number relations
# ---------------------------------------------------------------------------
def hodge_free_series(p_max: int) -> SitePolynomial:
    """The closed-form genus series of the derivative-free Hodge numbers,
    expanded through eps^p_max; the zeta constant stays symbolic."""
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    half_eps = Fraction(1, 2) * EPS
    L = _log_one_plus(half_eps, p_max + 2)
    out = (Fraction(-3, 8) * eps_pow(-2) - Fraction(1, 8) * eps_pow(-1)
           + Fraction(1, 2) * ZP + SitePolynomial.const(Fraction(1, 32)))
    out = out + (Fraction(1, 4) * eps_pow(-2) - SitePolynomial.const(Fraction(5, 48))) * L
    for p in range(1, p_max + 1):
        c = _p_tail_coeff(p)  # includes (-1)^p (p-1)! and the Bernoulli sum
        if not c:
            continue
        # (-eps)^p (1+eps/2)^-p (p-1)! S_p == c * eps^p * (1+eps/2)^-p at x->1
        inv = ZERO
        for m in range(p_max - p + 1):
            inv = inv + _gbinom(-p, m) * Fraction(1, 2 ** m) * eps_pow(m)
        out = out + c * eps_pow(p) * inv
    return _truncate_eps(out, p_max)


def _solve_exact(rows: List[List[Coeff]], rhs: List[Coeff]) -> List[Fraction]:
    """Gaussian elimination over the rationals; square systems only."""
    n = len(rows)
    A = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise InconsistentSystem("singular probe matrix")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [v - f * w for v, w in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def _as_coeff_map(p: SitePolynomial) -> Dict[int, Coeff]:
    """Split a polynomial in eps and zp into {eps power: rational}; the zp
    part must cancel before calling."""
    out = {}
    for e, cof in p.split_by(EPS_RANK).items():
        c = cof.constant_term()
        if not (cof == SitePolynomial.const(c)):
            raise InconsistentSystem(f"unexpected symbols at eps^{e}: {cof.to_text()}")
        out[e] = c
    return out


def _one_index_combined(j: int) -> Dict[int, Coeff]:
    """LHS-minus-corrections of the one-index Hodge relation at a probe j:
    what remains equals binom(2j,j) * sum_g eps^(2g-2) sum_i j^(i+1) H_{g,i}.

    The linear-in-size counterterm of the half-lattice free energy sits at
    (x - eps/2), the same half-step that shifts the generating point; a
    full-step shift would leave an uncancellable odd pole, which the
    evenness of the genus series forbids.
    """
    C = math.comb(2 * j, j)
    rhs = subs_x_one_plus_half_eps(b_series((2 * j,)), 4 * j + 4)
    corr = (Fraction(C * j, 2 * (1 + j)) - Fraction(C, 2)) * eps_pow(-2)
    return _as_coeff_map(rhs + corr)


@dataclass
class HodgeTable:
    """Solved Hodge numbers keyed by (genus, index tuple), plus the report."""

    entries: Dict[Tuple[int, Tuple[int, ...]], Coeff]
    report: Report

    def value(self, g: int, *indices: int) -> Coeff:
        return self.entries[(g, tuple(sorted(indices)))]


def solve_H_numbers(g_max: int, j_probe_count: int) -> HodgeTable:
    """Solve the one-index Hodge numbers per genus from probe values of the
    linear relation, verify the overdetermined residual and the vanishing
    bound, and cross-check the two-index relation against the resolvent form.
    """
    if g_max < 1:
        raise ValueError("g_max must be >= 1")
    checks: List[Check] = []
    entries: Dict[Tuple[int, Tuple[int, ...]], Coeff] = {}
    combined = {j: _one_index_combined(j) for j in range(1, j_probe_count + 1)}

    # odd eps powers carry no Hodge content and must cancel identically
    odd_ok = True
    odd_bad = None
    for j, cm in combined.items():
        for e, c in cm.items():
            if e % 2 and c:
                odd_ok = False
                odd_bad = f"probe {j}: eps^{e} -> {c}"
    checks.append(Check("odd-power-cancellation", j_probe_count,
                        "pass" if odd_ok else "fail", odd_bad))

    for g in range(0, g_max + 1):
        n_unknown = max(3 * g - 1, 1)
        if j_probe_count < n_unknown:
            raise ValueError("not enough probes for this genus")
        rows = [[j ** (i + 1) for i in range(n_unknown)]
                for j in range(1, j_probe_count + 1)]
        rhs = [Fraction(combined[j].get(2 * g - 2, 0), math.comb(2 * j, j))
               for j in range(1, j_probe_count + 1)]
        sol = _solve_exact([rows[i] for i in range(n_unknown)], rhs[:n_unknown])
        resid_ok = all(
            sum(rows[r][i] * sol[i] for i in range(n_unknown)) == rhs[r]
            for r in range(j_probe_count))
        checks.append(Check(f"one-index-residual[g={g}]", j_probe_count,
                            "pass" if resid_ok else "fail"))
        if not resid_ok:
            raise InconsistentSystem(f"nonzero residual at genus {g}")
        for i, v in enumerate(sol):
            entries[(g, (i,))] = v.numerator if v.denominator == 1 else v

    # vanishing-bound padding: one extra unknown must come back zero
    g = g_max
    n_unknown = max(3 * g - 1, 1) + 1
    rows = [[j ** (i + 1) for i in range(n_unknown)]
            for j in range(1, j_probe_count + 1)]
    rhs = [Fraction(combined[j].get(2 * g - 2, 0), math.comb(2 * j, j))
           for j in range(1, j_probe_count + 1)]
    sol = _solve_exact([rows[i] for i in range(n_unknown)], rhs[:n_unknown])
    pad_ok = sol[-1] == 0
    checks.append(Check(f"vanishing-bound-padding[g={g}]", None,
                        "pass" if pad_ok else "fail",
                        None if pad_ok else str(sol[-1])))

    checks.extend(_two_index_crosscheck(entries))
    rep = Report("hodge-numbers", checks)
    if not rep.passed:
        raise InconsistentSystem("; ".join(
            c.identity for c in checks if c.status != "pass"))
    return HodgeTable(entries, rep)


def _two_index_crosscheck(entries: Dict) -> List[Check]:
    """The two-index relation: resolvent route against the half-lattice
    expansion route, and a genus-1 solve for the two-index numbers."""
    checks = []
    probes = [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4)]
    J = max(j1 + j2 for j1, j2 in probes) + 3
    res = gue_resolvent(J)
    repl = Fraction(1, 2) + eps_pow(-1)

    def build(coeffs) -> LaurentSeries:
        out = {}
        for j in range(J + 1):
            v = coeffs[j].subs_gen(X_RANK, 0, repl) * eps_pow(j + 1)
            if v:
                out[-j - 1] = v
        return LaurentSeries(out, low=-J - 1, pmax=-1)

    al, be, ga = build(res.diag), build(res.upper), build(res.lower)
    aL = MultiSeries.from_series(al, 0, 2)
    aM = MultiSeries.from_series(al, 1, 2)
    S = (aL + aM + 2 * (aL * aM)
         + MultiSeries.from_series(be, 0, 2) * MultiSeries.from_series(ga, 1, 2)
         + MultiSeries.from_series(ga, 0, 2) * MultiSeries.from_series(be, 1, 2))
    T = divide_by_sq_diff(S)
    bvals = {}
    for j1, j2 in probes:
        lhs = T.coeff((-j1 - 1, -j2 - 1))
        b = subs_x_one_plus_half_eps(b_series((2 * j1, 2 * j2)), 4 * (j1 + j2))
        bvals[(j1, j2)] = b
        # the scaled-argument trace series reproduces the half-lattice
        # expansion with no leftover counterterm; the delta-weight of the
        # genus sum itself is pinned separately by genus-0 vanishing below
        diff = lhs - b * eps_pow(2)
        ok = diff.is_zero()
        checks.append(Check(f"two-index-bridge[{j1},{j2}]", None,
                            "pass" if ok else "fail",
                            None if ok else diff.to_text()))

    # two-index numbers from the expansion route; genus 0 must vanish by the
    # dimension count, so its lone unknown doubles as a padding check
    unknown_sets = {0: [(0, 0)], 1: [(0, 0), (0, 1), (0, 2), (1, 1)]}
    for g, idxs in unknown_sets.items():
        rows = []
        rhs = []
        for j1, j2 in probes:
            CC = math.comb(2 * j1, j1) * math.comb(2 * j2, j2)
            cm = _as_coeff_map(
                bvals[(j1, j2)]
                - Fraction(j1 * j2 * CC, 2 * (j1 + j2)) * eps_pow(-2))
            row = []
            for (i1, i2) in idxs:
                v = j1 ** (i1 + 1) * j2 ** (i2 + 1)
                if i1 != i2:
                    v += j1 ** (i2 + 1) * j2 ** (i1 + 1)
                row.append(v)
            rows.append(row)
            rhs.append(Fraction(cm.get(2 * g - 2, 0), CC))
        sol = _solve_exact(rows[: len(idxs)], rhs[: len(idxs)])
        resid_ok = all(
            sum(rows[r][i] * sol[i] for i in range(len(idxs))) == rhs[r]
            for r in range(len(probes)))
        checks.append(Check(f"two-index-residual[g={g}]", len(probes),
                            "pass" if resid_ok else "fail"))
        for (i1, i2), v in zip(idxs, sol):
            entries[(g, (i1, i2))] = v.numerator if v.denominator == 1 else v
        if g == 0:
            checks.append(Check("two-index-genus0-vanishing", None,
                                "pass" if all(v == 0 for v in sol) else "fail",
                                None if all(v == 0 for v in sol) else str(sol)))
    return checks
