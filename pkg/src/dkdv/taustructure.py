"""Tau-structure: the symmetric second-derivative family, its flow symmetry,
the k-point generating formula, and the site-summed reduced form.

The central object is the bi-series

    ( tr(R(lambda) R(mu)) - 1 ) / (lambda - mu)^2

whose coefficients are the lattice polynomials Omega[i,j].  Everything here
works at the base site; other sites are index shifts.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .algebra import (
    Matrix2,
    MultiSeries,
    NotCleanlyDivisible,
    SitePolynomial,
    ZERO,
    divide_by_sq_diff,
)
from .diffop import FlowDerivation, kdv_flow
from .resolvent import ResolventSeries, mr_recursion
from .reports import Check, Report

__all__ = [
    "omega",
    "omega_biseries",
    "omega_table",
    "d2_check",
    "kpoint_log_tau",
    "reduced_two_point",
    "derivation_correlator",
    "solve_shift2_difference",
    "verify_tau_structure",
]


def pair_trace_numerator(rs: ResolventSeries, site: int = 0) -> MultiSeries:
    """tr(R(lambda) R(mu)) - 1 as a bi-series over lattice polynomials."""
    al = rs.alpha(site)
    ga = rs.gamma(site)
    be = rs.beta(site)
    aL = MultiSeries.from_series(al, 0, 2)
    aM = MultiSeries.from_series(al, 1, 2)
    gL = MultiSeries.from_series(ga, 0, 2)
    gM = MultiSeries.from_series(ga, 1, 2)
    bL = MultiSeries.from_series(be, 0, 2)
    bM = MultiSeries.from_series(be, 1, 2)
    return aL + aM + 2 * (aL * aM) + bL * gM + gL * bM


@lru_cache(maxsize=32)
def omega_biseries(J: int, site: int = 0) -> MultiSeries:
    """The full generating bi-series of the tau-structure entries."""
    rs = mr_recursion(J)
    return divide_by_sq_diff(pair_trace_numerator(rs, site))


def omega(i: int, j: int, J: Optional[int] = None, site: int = 0) -> SitePolynomial:
    """The tau-structure entry Omega[i,j] at a site, gauge-fixed to have no
    constant term (which the generating series produces automatically)."""
    if i < 1 or j < 1:
        raise ValueError("indices must be >= 1")
    if J is None:
        J = i + j + 2
    T = omega_biseries(J, site)
    val = T.coeff((-i - 1, -j - 1))
    const = val.constant_term()
    if const:
        # the exponential-linear gauge would shift this; the normalized
        # family drops it, but its appearance would signal a bug upstream
        raise NotCleanlyDivisible(f"Omega[{i},{j}] has constant term {const}")
    return val


@lru_cache(maxsize=16)
def omega_table(weight: int, site: int = 0) -> Dict[Tuple[int, int], SitePolynomial]:
    """All Omega[i,j] with i+j <= weight, extracted from one bi-series.

    Treat the result as read-only (it is cached).
    """
    J = weight + 2
    T = omega_biseries(J, site)
    out = {}
    for i in range(1, weight):
        for j in range(1, weight + 1 - i):
            out[(i, j)] = T.coeff((-i - 1, -j - 1))
    return out


def d2_check(J: int) -> Report:
    """Two-site increment of the table against flow derivatives of the
    lower-left resolvent coefficients, for i+j <= J."""
    if J < 3:
        raise ValueError("J must be >= 3")
    table = omega_table(J)
    rs = mr_recursion(J + 2)
    flows: Dict[int, FlowDerivation] = {}
    checks = []
    for (i, j), om in sorted(table.items()):
        d = flows.setdefault(j, kdv_flow(j))
        lhs = om.shift(2) - om
        rhs = d(rs.c[i].shift(2))
        diff = lhs - rhs
        checks.append(Check(f"increment[{i};{j}]", i + j,
                            "pass" if diff.is_zero() else "fail",
                            None if diff.is_zero() else diff.to_text()))
    return Report("tau-structure-increment", checks)


# ---------------------------------------------------------------------------
# k-point generating formula
# ---------------------------------------------------------------------------
def _kernel_factor(a: int, b: int, nv: int, M: int) -> MultiSeries:
    """Truncated expansion of 1/(lambda_a - lambda_b), lower index dominant.

    Every term has total degree -1.  The factor carries no validity marks;
    the cyclic pipeline certifies its own window (see
    cyclic_sum_coefficients).
    """
    coeffs = {}
    dom, sub, sign = (a, b, 1) if a < b else (b, a, -1)
    for m in range(M + 1):
        key = [0] * nv
        key[dom] = -m - 1
        key[sub] = m
        coeffs[tuple(key)] = SitePolynomial.const(sign)
    pmaxs = [0] * nv
    pmaxs[dom] = -1
    pmaxs[sub] = M
    return MultiSeries(nv, coeffs, (None,) * nv, None, pmaxs, -1)


def _strip(ms: MultiSeries) -> MultiSeries:
    """Forget validity marks; the cyclic pipeline certifies its own window."""
    return MultiSeries(ms.nv, ms.c, (None,) * ms.nv, None, ms.pmaxs, ms.tpmax)


def _matrix_in_var(mat: Matrix2, var: int, nv: int) -> Matrix2:
    return mat.map(lambda s: _strip(MultiSeries.from_series(s, var, nv)))


def _mat_mul(A: Matrix2, B: Matrix2, tfloor: int) -> Matrix2:
    mul = lambda x, y: x.mul(y, tfloor=tfloor)
    return Matrix2(
        mul(A.a11, B.a11) + mul(A.a12, B.a21),
        mul(A.a11, B.a12) + mul(A.a12, B.a22),
        mul(A.a21, B.a11) + mul(A.a22, B.a21),
        mul(A.a21, B.a12) + mul(A.a22, B.a22),
    )


def cyclic_sum_coefficients(
    matrices: Sequence[Matrix2],
    targets: Iterable[Tuple[int, ...]],
    M: Optional[int] = None,
) -> Dict[Tuple[int, ...], SitePolynomial]:
    """Coefficients of -(1/k) sum_sigma tr(R_{s1} ... R_{sk}) / prod(...).

    ``matrices[v]`` is the resolvent in variable v as a one-variable series
    matrix.  All intermediates are pruned by total degree only, which is safe
    because every kernel term has total degree exactly -1 and numerator terms
    never exceed total degree 0, so dropped keys can never climb back above
    the floor.  Trust window on the output: total degree >= span excludes
    resolvent-truncation junk, and every kernel-truncation artifact carries a
    component below -(M+1), which the extraction window never touches.  A
    second run at a deeper kernel truncation re-certifies the targets, and
    surviving powers >= -1 inside the window raise.
    """
    targets = list(targets)
    k = len(matrices)
    if k < 3:
        raise ValueError("the cyclic formula is for k >= 3")
    depth = max(-min(t) for t in targets)
    entry_depth = max(
        (-s.low for mat in matrices for _, _, s in mat.entries() if s.low is not None),
        default=depth)
    base_M = M if M is not None else depth + entry_depth + 3
    span = min(sum(t) for t in targets)

    def run(Mtrunc: int) -> Dict[Tuple[int, ...], SitePolynomial]:
        total = None
        for sigma in itertools.permutations(range(k)):
            num = None
            for v in sigma:
                mv = _matrix_in_var(matrices[v], v, k)
                num = mv if num is None else _mat_mul(num, mv, span)
            tr = num.trace()
            ker = None
            for pos in range(k):
                f = _kernel_factor(sigma[pos], sigma[(pos + 1) % k], k, Mtrunc)
                ker = f if ker is None else ker.mul(f, tfloor=span)
            term = tr.mul(ker, tfloor=span)
            total = term if total is None else total + term
        total = total.scale(Fraction(-1, k))
        for key, v in total.c.items():
            if max(key) >= -1 and min(key) >= -Mtrunc and v:
                raise NotCleanlyDivisible(
                    f"cyclic sum leaves power {key}: {v.to_text()}")
        return {t: total.c.get(t, ZERO) for t in targets}

    first = run(base_M)
    second = run(base_M + 2)
    for t in targets:
        if not (first[t] == second[t]):
            raise NotCleanlyDivisible(
                f"kernel truncation unstable at {t}; deepen the resolvent order")
    return first


def kpoint_log_tau(k: int, J: int, weight: Optional[int] = None,
                   site: int = 0) -> Dict[Tuple[int, ...], SitePolynomial]:
    """Coefficients of the k-point generating series of log tau, k >= 3.

    Returns {(j_1..j_k): polynomial} for all index tuples with
    j_1+..+j_k <= weight (default J - 2).
    """
    if k < 3:
        raise ValueError("k must be >= 3")
    if J < k + 2:
        raise ValueError("J must be >= k + 2")
    if weight is None:
        weight = J - 2
    rs = mr_recursion(J)
    R = _assemble(rs, site)
    matrices = [R] * k
    targets = []
    for js in itertools.product(range(1, weight + 1), repeat=k):
        if sum(js) <= weight:
            targets.append(tuple(-j - 1 for j in js))
    coeffs = cyclic_sum_coefficients(matrices, targets)
    out = {}
    for t, v in coeffs.items():
        js = tuple(-q - 1 for q in t)
        out[js] = v
    # permutation symmetry of the output
    for js, v in out.items():
        canon = tuple(sorted(js))
        if out[tuple(sorted(js))] != v:
            raise NotCleanlyDivisible(f"asymmetric k-point output at {js}")
    return out


def _assemble(rs: ResolventSeries, site: int) -> Matrix2:
    from .resolvent import assemble_resolvent

    return assemble_resolvent(rs, site)


def reduced_two_point(J: int, site: int = 0) -> MultiSeries:
    """The site-summed two-point series of the reduced tau-function.

    (1+shift) applied to the pair-trace kernel; the constant subtraction
    cancels the doubled identity contribution, leaving the clean bi-series
    equal to Omega(site) + Omega(site+1) termwise.
    """
    if J < 3:
        raise ValueError("J must be >= 3")
    rs = mr_recursion(J)
    S = pair_trace_numerator(rs, site) + pair_trace_numerator(rs, site + 1)
    return divide_by_sq_diff(S)


def derivation_correlator(js: Sequence[int], J: Optional[int] = None,
                          site: int = 0) -> SitePolynomial:
    """Mixed flow derivative of log tau with k >= 2 indices, as a lattice
    polynomial: flow derivations applied to a tau-structure entry.

    Independent of the cyclic-sum formula; used as its oracle and as the
    cheap route for high k.
    """
    js = sorted(js)
    if len(js) < 2:
        raise ValueError("needs at least two indices")
    base = omega(js[0], js[1], J, site)
    for r in js[2:]:
        base = kdv_flow(r)(base)
    return base


def solve_shift2_difference(g: SitePolynomial, max_steps: int = 500) -> SitePolynomial:
    """Solve shift(F, 2) - F = G for F with zero constant term.

    Greedy telescoping: repeatedly match the largest remaining monomial (by
    maximal lattice index) against the up-shifted image.  The result is
    verified before returning, so greedy failure cannot produce a wrong
    answer.  Unsolvable inputs raise.
    """
    if not g.has_only_w():
        raise ValueError("telescoping works on lattice polynomials")
    f = ZERO
    residue = g
    for _ in range(max_steps):
        if residue.is_zero():
            break
        best = None
        best_key = None
        for m in residue.terms:
            if not m:
                raise ArithmeticError("constant term cannot telescope")
            key = tuple(sorted(((-idx, e) for (_, idx), e in m)))
            if best_key is None or key < best_key:
                best_key = key
                best = m
        coeff = residue.terms[best]
        piece = SitePolynomial({best: coeff}).shift(-2)
        f = f + piece
        residue = residue - (piece.shift(2) - piece)
    else:
        raise ArithmeticError("telescoping did not terminate")
    if not (f.shift(2) - f == g):
        raise ArithmeticError("telescoping produced an invalid solution")
    return f


def verify_tau_structure(weight: int = 10, flow_max: int = 3) -> Report:
    """Symmetry, flow symmetry, and the telescoping oracle for the table."""
    checks = []
    table = omega_table(weight)
    bad = None
    for (i, j), v in table.items():
        if not (table[(j, i)] == v):
            bad = f"Omega[{i},{j}] != Omega[{j},{i}]"
            break
        if not v.is_integral():
            bad = f"Omega[{i},{j}] not integral"
            break
    checks.append(Check("omega-symmetry", weight, "pass" if bad is None else "fail", bad))

    flows = {r: kdv_flow(r) for r in range(1, flow_max + 1)}
    bad = None
    for p in range(1, flow_max + 1):
        for q in range(1, flow_max + 1):
            for r in range(1, flow_max + 1):
                lhs = flows[r](table[(p, q)])
                rhs = flows[q](table[(p, r)])
                if not (lhs - rhs).is_zero():
                    bad = f"D_{r} Omega[{p},{q}] != D_{q} Omega[{p},{r}]"
                    break
            if bad:
                break
        if bad:
            break
    checks.append(Check("flow-symmetry", flow_max, "pass" if bad is None else "fail", bad))

    # telescoping oracle for the first entries
    rs = mr_recursion(weight + 2)
    for (i, j) in ((1, 1), (1, 2), (2, 1)):
        target = flows.get(j, kdv_flow(j))(rs.c[i].shift(2))
        f = solve_shift2_difference(target)
        diff = f - table[(i, j)]
        checks.append(Check(f"telescoping-oracle[{i};{j}]", i + j,
                            "pass" if diff.is_zero() else "fail",
                            None if diff.is_zero() else diff.to_text()))
    return Report("tau-structure", checks)
