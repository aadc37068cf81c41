"""The shift-operator ring and the lattice flows it generates.

Everything is stored at the base site n = 0 (w_n becomes w[0]); evaluation at
site n is a shift of every lattice index by n.  The two workhorses are

    P = S + w[0] S^-1        (S the unit shift)
    L = P^2 = S^2 + (w[1]+w[0]) + w[0] w[-1] S^-2

whose power coefficients drive every identity of the hierarchy.  Operator
identities are checked here as exact polynomial statements; they hold without
assuming that w solves anything.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, Optional

from .algebra import ONE, SitePolynomial, ZERO, w
from .reports import Check, Report

__all__ = [
    "DiffOp",
    "FlowDerivation",
    "DerivationOnSymbol",
    "shift_op",
    "p_op",
    "l_op",
    "p_power",
    "l_power",
    "a_coeff",
    "m_coeff",
    "diffop_mul",
    "plus_part",
    "kdv_flow",
    "apply_derivation",
    "verify_operator_identities",
    "verify_flow_equivalence",
]


class DerivationOnSymbol(Exception):
    """A lattice derivation was applied to a polynomial with formal symbols."""


class DiffOp:
    """Finite-support Laurent polynomial in the shift with polynomial coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[int, SitePolynomial]] = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @staticmethod
    def identity() -> "DiffOp":
        return DiffOp({0: ONE})

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return DiffOp(out)

    def __neg__(self) -> "DiffOp":
        return DiffOp({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        # S^k f = f(shifted by k) S^k, so (A B)_m = sum_k A_k * shift(B_{m-k}, k)
        out: Dict[int, SitePolynomial] = {}
        for k, a in self.coeffs.items():
            for m2, b in other.coeffs.items():
                m = k + m2
                term = a * b.shift(k)
                if m in out:
                    out[m] = out[m] + term
                else:
                    out[m] = term
        return DiffOp(out)

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self * other - other * self

    def plus_part(self) -> "DiffOp":
        return DiffOp({k: v for k, v in self.coeffs.items() if k >= 0})

    def coeff(self, k: int) -> SitePolynomial:
        return self.coeffs.get(k, ZERO)

    def shift_sites(self, d: int) -> "DiffOp":
        return DiffOp({k: v.shift(d) for k, v in self.coeffs.items()})

    def support(self):
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.coeffs == other.coeffs

    __hash__ = None

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({self.coeffs[k].to_text()}) * L^{k}" for k in sorted(self.coeffs))

    def __repr__(self):
        return f"DiffOp({self.to_text()})"


def shift_op(k: int = 1) -> DiffOp:
    return DiffOp({k: ONE})


def p_op() -> DiffOp:
    return DiffOp({1: ONE, -1: w(0)})


def l_op() -> DiffOp:
    return p_op() * p_op()


def diffop_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    return a * b


def plus_part(a: DiffOp) -> DiffOp:
    return a.plus_part()


_P_POWERS = [DiffOp.identity()]
_L_POWERS = [DiffOp.identity()]
_CACHE_LOCK = threading.Lock()


def p_power(m: int) -> DiffOp:
    """P^m, cached (verification suites may share the cache across threads)."""
    with _CACHE_LOCK:
        while len(_P_POWERS) <= m:
            _P_POWERS.append(_P_POWERS[-1] * p_op())
        return _P_POWERS[m]


def l_power(j: int) -> DiffOp:
    """L^j, cached."""
    with _CACHE_LOCK:
        while len(_L_POWERS) <= j:
            _L_POWERS.append(_L_POWERS[-1] * l_op())
        return _L_POWERS[j]


def a_coeff(ell: int, k: int) -> SitePolynomial:
    """Coefficient of S^k in P^(ell+1), at the base site."""
    return p_power(ell + 1).coeff(k)


def m_coeff(j: int, k: int) -> SitePolynomial:
    """Coefficient of S^k in L^j, at the base site."""
    return l_power(j).coeff(k)


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FlowDerivation:
    """The j-th lattice flow as a derivation on the lattice polynomial ring."""

    j: int
    rhs0: SitePolynomial  # d w[0] / d s_j

    def rhs(self, k: int) -> SitePolynomial:
        return self.rhs0.shift(k)

    def __call__(self, p: SitePolynomial) -> SitePolynomial:
        return apply_derivation(self, p)

    def apply_op(self, a: DiffOp) -> DiffOp:
        return DiffOp({k: self(v) for k, v in a.coeffs.items()})


def kdv_flow(j: int) -> FlowDerivation:
    """The flow d w[0]/d s_j = w[0] ( m_{j,0} - m_{j,0} one site down )."""
    if j < 1:
        raise ValueError("flow index must be >= 1")
    m0 = m_coeff(j, 0)
    return FlowDerivation(j, w(0) * (m0 - m0.shift(-1)))


def apply_derivation(d: FlowDerivation, p: SitePolynomial) -> SitePolynomial:
    """Leibniz extension of the flow to the whole lattice polynomial ring."""
    if not p.has_only_w():
        raise DerivationOnSymbol(
            "flows act on lattice polynomials only; got formal symbols in "
            + p.to_text()
        )
    out = ZERO
    for k in sorted(p.w_indices()):
        partial = p.diff_gen(0, k)  # rank 0 = lattice variable
        if partial:
            out = out + partial * d.rhs(k)
    return out


# ---------------------------------------------------------------------------
# identity suites
# ---------------------------------------------------------------------------
def _poly_check(name: str, order: Optional[int], diff: SitePolynomial) -> Check:
    if diff.is_zero():
        return Check(name, order, "pass")
    return Check(name, order, "fail", diff.to_text())


def verify_operator_identities(jmax: int) -> Report:
    """Exact checks of the power-coefficient identities up to j <= jmax.

    The third mixed identity below is implemented with the third term at site
    n+1, which is the form that actually follows from comparing coefficients
    in P^(ell+1) P = P P^(ell+1); see the companion tests.
    """
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    checks = []
    w0, w1, w2 = w(0), w(1), w(2)
    wm1, wm2, wm3 = w(-1), w(-2), w(-3)

    for j in range(1, jmax + 1):
        ell = 2 * j - 1
        supp = set(l_power(j).coeffs) | set(p_power(ell + 1).coeffs)
        diff = ZERO
        for k in sorted(supp):
            diff = m_coeff(j, k) - a_coeff(ell, k)
            if not diff.is_zero():
                break
        checks.append(_poly_check(f"m-vs-A[j={j}]", j, diff))

    for j in range(1, jmax + 1):
        checks.append(_poly_check(
            f"id00[j={j}]", j,
            m_coeff(j, -2) - w0 * wm1 * m_coeff(j, 2).shift(-2)))
        checks.append(_poly_check(
            f"id01[j={j}]", j,
            m_coeff(j, 0) - (m_coeff(j - 1, -2) + m_coeff(j - 1, -2).shift(2)
                             + (w1 + w0) * m_coeff(j - 1, 0))))
        checks.append(_poly_check(
            f"id02[j={j}]", j,
            m_coeff(j, -2) - m_coeff(j, -2).shift(-2)
            - (wm1 + wm2) * (m_coeff(j - 1, -2) - m_coeff(j - 1, -2).shift(-2))
            + wm2 * wm3 * m_coeff(j - 1, 0).shift(-4)
            - w0 * wm1 * m_coeff(j - 1, 0)))
        checks.append(_poly_check(
            f"keyid[j={j}]", j,
            m_coeff(j, 0).shift(1) - m_coeff(j, 0)
            - (w2 * m_coeff(j, 2) - w0 * m_coeff(j, 2).shift(-1))))

    for ell in range(1, 2 * jmax):
        checks.append(_poly_check(
            f"id0p[l={ell}]", ell,
            a_coeff(ell, -1) - w0 * a_coeff(ell, 1).shift(-1)))
        checks.append(_poly_check(
            f"id1p[l={ell}]", ell,
            a_coeff(ell, 0) - (w1 * a_coeff(ell - 1, 1)
                               + w0 * a_coeff(ell - 1, 1).shift(-1))))
        checks.append(_poly_check(
            f"id2p[l={ell}]", ell,
            w0 * a_coeff(ell, 1).shift(-1) - w1 * a_coeff(ell, 1)
            + w1 * a_coeff(ell - 1, 0).shift(1) - w0 * a_coeff(ell - 1, 0).shift(-1)))
        checks.append(_poly_check(
            f"idpkey[l={ell}]", ell,
            a_coeff(ell, 0).shift(1) - a_coeff(ell, 0)
            - (w2 * a_coeff(ell, 2) - w0 * a_coeff(ell, 2).shift(-1))))

    # structural vanishing and integrality
    ok = True
    bad = None
    for j in range(0, jmax + 1):
        for k, v in l_power(j).coeffs.items():
            if k % 2 != 0 or abs(k) > 2 * j:
                ok = False
                bad = f"L^{j} has S^{k} coefficient {v.to_text()}"
            if not v.is_integral():
                ok = False
                bad = f"L^{j} coefficient at S^{k} is not integral"
    for ell in range(0, 2 * jmax):
        for k, v in p_power(ell + 1).coeffs.items():
            if not v.is_integral():
                ok = False
                bad = f"P^{ell + 1} coefficient at S^{k} is not integral"
    checks.append(Check("support-and-integrality", jmax, "pass" if ok else "fail", bad))
    return Report("operator-identities", checks)


def verify_flow_equivalence(jmax: int) -> Report:
    """Flows as derivations versus commutators, on both P and L."""
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    checks = []
    for j in range(1, jmax + 1):
        d = kdv_flow(j)
        a = l_power(j).plus_part()
        for name, op in (("P", p_op()), ("L", l_op())):
            lhs = d.apply_op(op)
            rhs = a.commutator(op)
            diff = lhs - rhs
            if diff.is_zero():
                checks.append(Check(f"flow-vs-commutator[{name},j={j}]", j, "pass"))
            else:
                k0 = diff.support()[0]
                checks.append(Check(
                    f"flow-vs-commutator[{name},j={j}]", j, "fail",
                    f"S^{k0}: " + diff.coeff(k0).to_text()))
    return Report("flow-equivalence", checks)


def verify_flow_commutativity(imax: int = 3) -> Report:
    """D_i D_j w[0] = D_j D_i w[0] for the first few flows."""
    checks = []
    flows = {i: kdv_flow(i) for i in range(1, imax + 1)}
    for i in range(1, imax + 1):
        for j in range(i + 1, imax + 1):
            lhs = flows[i](flows[j](w(0)))
            rhs = flows[j](flows[i](w(0)))
            checks.append(_poly_check(f"flow-commute[{i},{j}]", None, lhs - rhs))
    return Report("flow-commutativity", checks)
