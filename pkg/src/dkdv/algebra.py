"""Exact arithmetic backbone: rationals, site polynomials, truncated series.

Coefficients are arbitrary-precision rationals (plain ``int`` fast path,
``fractions.Fraction`` otherwise).  Polynomials live in the ring generated by
the lattice variables w[k] (k in Z, offsets from a base site) together with
the formal symbols x, eps, logx and zp; the last two are opaque
transcendentals that are matched structurally, never expanded.

Series types carry their truncation window explicitly and every binary
operation recomputes the validity window of the result, so coefficients
beyond the trustworthy depth are never stored, let alone reported.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

Coeff = Union[int, Fraction]

__all__ = [
    "Coeff",
    "SitePolynomial",
    "LaurentSeries",
    "MultiSeries",
    "BiSeries",
    "Matrix2",
    "AlgebraError",
    "SeriesDepthError",
    "NotCleanlyDivisible",
    "w",
    "X",
    "EPS",
    "LOGX",
    "ZP",
    "ZERO",
    "ONE",
    "poly",
    "poly_shift",
    "series_mul",
    "divide_by_sq_diff",
]


class AlgebraError(Exception):
    """Base class for arithmetic-layer failures."""


class SeriesDepthError(AlgebraError):
    """A coefficient beyond the trustworthy truncation depth was requested."""


class NotCleanlyDivisible(AlgebraError):
    """Division by (lambda-mu)^2 left a power >= -1 within the valid depth."""


def _norm_coeff(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# generators and monomials
# ---------------------------------------------------------------------------
# A generator is encoded as a pair (rank, idx): rank 0 is the lattice variable
# w[idx]; ranks 1..4 are the symbols x, eps, logx, zp (idx fixed to 0).
W_RANK, X_RANK, EPS_RANK, LOGX_RANK, ZP_RANK = range(5)
_SYMBOL_NAMES = {X_RANK: "x", EPS_RANK: "eps", LOGX_RANK: "logx", ZP_RANK: "zp"}

# A monomial is a tuple of ((rank, idx), exp) pairs sorted by (rank, idx),
# exponents nonzero.  Exponents may be negative: eps and x occur with negative
# powers in the genus-expansion outputs (Laurent monomials); w-generators only
# ever carry positive exponents in practice.
Monomial = tuple


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 == g2:
            e = e1 + e2
            if e:
                out.append((g1, e))
            i += 1
            j += 1
        elif g1 < g2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial):
    # graded lexicographic: total degree first, then the generator sequence
    return (-_mono_degree(m), m)


def _mono_text(m: Monomial) -> str:
    # display order: w[k] by descending k, then x, eps, logx, zp
    parts = []
    for (rank, idx), e in sorted(m, key=lambda ge: (ge[0][0], -ge[0][1])):
        if rank == W_RANK:
            base = f"w[{idx}]"
        else:
            base = _SYMBOL_NAMES[rank]
        parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts)


class SitePolynomial:
    """Exact multivariate (Laurent) polynomial in w[k], x, eps, logx, zp."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Coeff]] = None):
        t = {}
        if terms:
            for m, c in terms.items():
                c = _norm_coeff(c)
                if c:
                    t[m] = c
        self.terms = t

    @staticmethod
    def _raw(terms: dict) -> "SitePolynomial":
        p = SitePolynomial.__new__(SitePolynomial)
        p.terms = terms
        return p

    # -- constructors -------------------------------------------------------
    @staticmethod
    def const(c: Coeff) -> "SitePolynomial":
        c = _norm_coeff(c)
        return SitePolynomial._raw({(): c} if c else {})

    @staticmethod
    def gen(rank: int, idx: int = 0, exp: int = 1) -> "SitePolynomial":
        return SitePolynomial._raw({(((rank, idx), exp),): 1})

    # -- ring structure -----------------------------------------------------
    def _coerce(self, other) -> "SitePolynomial":
        if isinstance(other, SitePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return SitePolynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in q.terms.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                s = _norm_coeff(acc + c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return SitePolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SitePolynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _norm_coeff(other)
            if not other:
                return ZERO
            return SitePolynomial._raw(
                {m: _norm_coeff(c * other) for m, c in self.terms.items()}
            )
        if not isinstance(other, SitePolynomial):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                acc = out.get(m)
                out[m] = c if acc is None else acc + c
        return SitePolynomial._raw(
            {m: _norm_coeff(c) for m, c in out.items() if c}
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * _inv(other)
        return NotImplemented

    def __eq__(self, other):
        q = self._coerce(other)
        if q is NotImplemented:
            return NotImplemented
        return self.terms == q.terms

    def __bool__(self):
        return bool(self.terms)

    __hash__ = None  # mutable-dict backed; never used as a key

    # -- structure queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_integral(self) -> bool:
        """True when every coefficient is an integer (the Z[w] contexts)."""
        return all(isinstance(c, int) for c in self.terms.values())

    def constant_term(self) -> Coeff:
        return self.terms.get((), 0)

    def coeff(self, m: Monomial) -> Coeff:
        return self.terms.get(m, 0)

    def gens(self) -> set:
        out = set()
        for m in self.terms:
            for g, _ in m:
                out.add(g)
        return out

    def w_indices(self) -> set:
        return {idx for (rank, idx) in self.gens() if rank == W_RANK}

    def has_only_w(self) -> bool:
        return all(rank == W_RANK for rank, _ in self.gens())

    def degree_in(self, rank: int, idx: int = 0) -> int:
        g = (rank, idx)
        best = 0
        for m in self.terms:
            for gg, e in m:
                if gg == g:
                    best = max(best, e)
        return best

    # -- substitutions -------------------------------------------------------
    def shift(self, d: int) -> "SitePolynomial":
        """Translate every w[k] to w[k+d]; the symbols stay fixed."""
        if d == 0 or not self.terms:
            return self
        out = {}
        for m, c in self.terms.items():
            nm = tuple(
                (((rank, idx + d), e) if rank == W_RANK else ((rank, idx), e))
                for (rank, idx), e in m
            )
            out[tuple(sorted(nm))] = c
        return SitePolynomial._raw(out)

    def diff_gen(self, rank: int, idx: int = 0) -> "SitePolynomial":
        """Formal partial derivative with respect to one generator."""
        g = (rank, idx)
        out: dict = {}
        for m, c in self.terms.items():
            for pos, (gg, e) in enumerate(m):
                if gg == g:
                    rest = m[:pos] + ((gg, e - 1),) + m[pos + 1:] if e != 1 else m[:pos] + m[pos + 1:]
                    cc = c * e
                    acc = out.get(rest)
                    out[rest] = cc if acc is None else acc + cc
                    break
        return SitePolynomial._raw({m: _norm_coeff(c) for m, c in out.items() if c})

    def subs_gen(self, rank: int, idx: int, replacement: "SitePolynomial") -> "SitePolynomial":
        """Substitute one generator by a polynomial (nonnegative powers only)."""
        g = (rank, idx)
        out = ZERO
        cache: dict = {0: ONE}

        def rpow(e: int) -> "SitePolynomial":
            if e not in cache:
                cache[e] = rpow(e - 1) * replacement
            return cache[e]

        for m, c in self.terms.items():
            e0 = 0
            rest = []
            for gg, e in m:
                if gg == g:
                    e0 = e
                else:
                    rest.append((gg, e))
            if e0 < 0:
                raise AlgebraError(
                    "cannot substitute into a negative power; expand as a series instead"
                )
            term = SitePolynomial._raw({tuple(rest): c})
            out = out + (term * rpow(e0) if e0 else term)
        return out

    def subs_w_affine(self) -> "SitePolynomial":
        """Specialize every w[k] to x + k (the GUE initial data)."""
        out = ZERO
        for m, c in self.terms.items():
            term = SitePolynomial.const(c)
            for (rank, idx), e in m:
                if rank == W_RANK:
                    if e < 0:
                        raise AlgebraError("negative w-power in specialization")
                    term = term * (X + idx) ** e
                else:
                    term = term * SitePolynomial.gen(rank, idx, e)
            out = out + term
        return out

    def split_by(self, rank: int, idx: int = 0) -> dict:
        """Decompose as a Laurent polynomial in one generator.

        Returns {exponent: cofactor polynomial}; exponent 0 collects all
        terms free of the generator.
        """
        g = (rank, idx)
        out: dict = {}
        for m, c in self.terms.items():
            e0 = 0
            rest = []
            for gg, e in m:
                if gg == g:
                    e0 = e
                else:
                    rest.append((gg, e))
            bucket = out.setdefault(e0, {})
            key = tuple(rest)
            acc = bucket.get(key)
            bucket[key] = c if acc is None else _norm_coeff(acc + c)
        return {
            e: SitePolynomial._raw({m: c for m, c in b.items() if c})
            for e, b in out.items()
            if any(b.values())
        }

    def eval_at(self, values: Mapping) -> Coeff:
        """Evaluate at numeric generator values, e.g. {("x",): 3}.

        Keys are (rank, idx) pairs; every generator present must be covered.
        """
        total: Coeff = 0
        for m, c in self.terms.items():
            v: Coeff = c
            for g, e in m:
                base = values[g]
                if e >= 0:
                    v = v * base**e
                else:
                    v = v * Fraction(1, 1) / Fraction(base) ** (-e)
            total = total + v
        return _norm_coeff(Fraction(total) if isinstance(total, Fraction) else total)

    # -- rendering -----------------------------------------------------------
    def to_text(self) -> str:
        """Canonical text form: terms joined by " + ", graded-lex ordered."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(_mono_text(m))
            else:
                parts.append(f"{c}*{_mono_text(m)}")
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"SitePolynomial({self.to_text()})"


def _inv(c: Coeff) -> Fraction:
    return Fraction(1, 1) / Fraction(c)


ZERO = SitePolynomial.const(0)
ONE = SitePolynomial.const(1)
X = SitePolynomial.gen(X_RANK)
EPS = SitePolynomial.gen(EPS_RANK)
LOGX = SitePolynomial.gen(LOGX_RANK)
ZP = SitePolynomial.gen(ZP_RANK)


def w(k: int, exp: int = 1) -> SitePolynomial:
    """The lattice variable w[k] (offset k from the base site)."""
    return SitePolynomial.gen(W_RANK, k, exp)


def poly(c: Coeff) -> SitePolynomial:
    return SitePolynomial.const(c)


def poly_shift(p: SitePolynomial, d: int) -> SitePolynomial:
    """Ring homomorphism sending w[k] to w[k+d] (x, eps, logx, zp fixed)."""
    return p.shift(d)


def eps_pow(e: int) -> SitePolynomial:
    return SitePolynomial.gen(EPS_RANK, 0, e) if e else ONE


def x_pow(e: int) -> SitePolynomial:
    return SitePolynomial.gen(X_RANK, 0, e) if e else ONE


# ---------------------------------------------------------------------------
# validity-window helpers (None plays -infinity for lows, "empty" for pmax)
# ---------------------------------------------------------------------------
def _max_opt(a: Optional[int], b: Optional[int]) -> Optional[int]:
    # max with None = -infinity
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


def _mul_channel(low: Optional[int], pmax: Optional[int]) -> Optional[int]:
    # contamination channel: (unknown part of one factor) x (content bound of
    # the other); absent if the factor is fully known or the other is empty
    if low is None or pmax is None:
        return None
    return low + pmax


class LaurentSeries:
    """Truncated Laurent series in one variable over SitePolynomial.

    ``low`` is the lowest trustworthy power (None = exact, valid at every
    power); ``pmax`` is a structural upper bound on the support of the full
    object, known and unknown parts alike (None = identically zero).
    Coefficients outside the valid window are never stored.
    """

    __slots__ = ("c", "low", "pmax")

    def __init__(self, coeffs: Mapping[int, SitePolynomial], low: Optional[int] = None,
                 pmax: Optional[int] = "derive"):
        cc = {}
        for p, v in coeffs.items():
            if v and (low is None or p >= low):
                cc[p] = v
        if pmax == "derive":
            pmax = max(cc) if cc else None
        self.c = cc
        self.low = low
        self.pmax = pmax

    # -- constructors -------------------------------------------------------
    @staticmethod
    def from_poly(p: SitePolynomial, power: int = 0) -> "LaurentSeries":
        return LaurentSeries({power: p})

    @staticmethod
    def lam(power: int = 1) -> "LaurentSeries":
        return LaurentSeries({power: ONE})

    @staticmethod
    def zero() -> "LaurentSeries":
        return LaurentSeries({})

    # -- access --------------------------------------------------------------
    def valid_at(self, p: int) -> bool:
        return self.low is None or p >= self.low

    def coeff(self, p: int) -> SitePolynomial:
        if not self.valid_at(p):
            raise SeriesDepthError(
                f"coefficient at power {p} is below the valid depth (low={self.low})"
            )
        return self.c.get(p, ZERO)

    def order(self) -> Optional[int]:
        """Truncation depth J when the series is valid down to -(J+1)."""
        return None if self.low is None else -self.low - 1

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentSeries.from_poly(SitePolynomial.const(other))
        if isinstance(other, SitePolynomial):
            return LaurentSeries.from_poly(other)
        return None

    def __add__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        low = _max_opt(self.low, q.low)
        out = dict(self.c)
        for p, v in q.c.items():
            out[p] = out.get(p, ZERO) + v
        return LaurentSeries(out, low, _max_opt(self.pmax, q.pmax))

    __radd__ = __add__

    def __neg__(self):
        s = LaurentSeries.__new__(LaurentSeries)
        s.c = {p: -v for p, v in self.c.items()}
        s.low = self.low
        s.pmax = self.pmax
        return s

    def __sub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, SitePolynomial)):
            if isinstance(other, (int, Fraction)):
                other = SitePolynomial.const(other)
            s = LaurentSeries.__new__(LaurentSeries)
            s.c = {p: v for p, v in ((p, v * other) for p, v in self.c.items()) if v}
            s.low = self.low
            s.pmax = self.pmax
            return s
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        low = _max_opt(_mul_channel(self.low, other.pmax),
                       _mul_channel(other.low, self.pmax))
        if self.pmax is None or other.pmax is None:
            return LaurentSeries({}, low, None)
        out: dict = {}
        for p1, v1 in self.c.items():
            for p2, v2 in other.c.items():
                p = p1 + p2
                if low is not None and p < low:
                    continue
                prod = v1 * v2
                if p in out:
                    out[p] = out[p] + prod
                else:
                    out[p] = prod
        return LaurentSeries(out, low, self.pmax + other.pmax)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, SitePolynomial)):
            return self * other
        return NotImplemented

    # -- reshaping ------------------------------------------------------------
    def shift_sites(self, d: int) -> "LaurentSeries":
        if d == 0:
            return self
        s = LaurentSeries.__new__(LaurentSeries)
        s.c = {p: v.shift(d) for p, v in self.c.items()}
        s.low = self.low
        s.pmax = self.pmax
        return s

    def mul_lam_power(self, k: int) -> "LaurentSeries":
        s = LaurentSeries.__new__(LaurentSeries)
        s.c = {p + k: v for p, v in self.c.items()}
        s.low = None if self.low is None else self.low + k
        s.pmax = None if self.pmax is None else self.pmax + k
        return s

    def subs_lam_squared(self) -> "LaurentSeries":
        """Replace the series variable by its square (powers double)."""
        s = LaurentSeries.__new__(LaurentSeries)
        s.c = {2 * p: v for p, v in self.c.items()}
        s.low = None if self.low is None else 2 * self.low
        s.pmax = None if self.pmax is None else 2 * self.pmax
        return s

    def subs_lam_negated(self) -> "LaurentSeries":
        s = LaurentSeries.__new__(LaurentSeries)
        s.c = {p: (v if p % 2 == 0 else -v) for p, v in self.c.items()}
        s.low = self.low
        s.pmax = self.pmax
        return s

    def plus_part(self) -> "LaurentSeries":
        """Polynomial part (powers >= 0); requires those powers to be valid."""
        if self.low is not None and self.low > 0:
            raise SeriesDepthError("positive part not fully within valid depth")
        return LaurentSeries({p: v for p, v in self.c.items() if p >= 0}, None)

    def truncate(self, low: int) -> "LaurentSeries":
        return LaurentSeries(self.c, _max_opt(self.low, low), self.pmax)

    def map_coeffs(self, f) -> "LaurentSeries":
        s = LaurentSeries.__new__(LaurentSeries)
        s.c = {p: fv for p, fv in ((p, f(v)) for p, v in self.c.items()) if fv}
        s.low = self.low
        s.pmax = self.pmax
        return s

    # -- comparisons ----------------------------------------------------------
    def is_zero_within_depth(self) -> bool:
        return not self.c

    def first_nonzero(self):
        """(power, coefficient) of the lowest-degree stored term, or None."""
        if not self.c:
            return None
        p = min(self.c)
        return p, self.c[p]

    def __repr__(self):
        inner = ", ".join(f"{p}: {v}" for p, v in sorted(self.c.items()))
        return f"LaurentSeries(low={self.low}, {{{inner}}})"


def series_mul(s: LaurentSeries, t: LaurentSeries) -> LaurentSeries:
    """Product truncated to the smaller valid depth (exact within it)."""
    return s * t


class MultiSeries:
    """Truncated series in several variables over SitePolynomial.

    Validity is tracked both as a per-variable box (``lows``) and as a total
    degree floor (``tlow``); both constraints must hold for a coefficient to
    be trustworthy.  ``pmaxs``/``tpmax`` bound the support of the full object.
    """

    __slots__ = ("nv", "c", "lows", "tlow", "pmaxs", "tpmax")

    def __init__(self, nv: int, coeffs: Mapping[tuple, SitePolynomial],
                 lows: Sequence[Optional[int]], tlow: Optional[int],
                 pmaxs: Sequence[Optional[int]], tpmax: Optional[int]):
        self.nv = nv
        self.lows = tuple(lows)
        self.tlow = tlow
        self.pmaxs = tuple(pmaxs)
        self.tpmax = tpmax
        cc = {}
        for k, v in coeffs.items():
            if v and self.valid_at(k):
                cc[k] = v
        self.c = cc

    # -- constructors -------------------------------------------------------
    @staticmethod
    def from_series(s: LaurentSeries, var: int, nv: int) -> "MultiSeries":
        lows: list = [None] * nv
        pmaxs: list = [0] * nv
        lows[var] = s.low
        pmaxs[var] = s.pmax
        coeffs = {}
        for p, v in s.c.items():
            key = [0] * nv
            key[var] = p
            coeffs[tuple(key)] = v
        if s.pmax is None:
            pmaxs = [None] * nv
            tpmax = None
        else:
            tpmax = s.pmax
        return MultiSeries(nv, coeffs, lows, s.low, pmaxs, tpmax)

    @staticmethod
    def constant(p: SitePolynomial, nv: int) -> "MultiSeries":
        key = (0,) * nv
        if p.is_zero():
            return MultiSeries(nv, {}, [None] * nv, None, [None] * nv, None)
        return MultiSeries(nv, {key: p}, [None] * nv, None, [0] * nv, 0)

    # -- access ---------------------------------------------------------------
    def valid_at(self, key: tuple) -> bool:
        for q, lo in zip(key, self.lows):
            if lo is not None and q < lo:
                return False
        if self.tlow is not None and sum(key) < self.tlow:
            return False
        return True

    def coeff(self, key: tuple) -> SitePolynomial:
        if not self.valid_at(key):
            raise SeriesDepthError(f"coefficient at {key} is outside the valid window")
        return self.c.get(key, ZERO)

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other: "MultiSeries"):
        if self.nv != other.nv:
            raise AlgebraError("variable-count mismatch")

    def __add__(self, other: "MultiSeries"):
        if isinstance(other, (int, Fraction, SitePolynomial)):
            other = MultiSeries.constant(
                other if isinstance(other, SitePolynomial) else SitePolynomial.const(other),
                self.nv,
            )
        self._check(other)
        lows = tuple(_max_opt(a, b) for a, b in zip(self.lows, other.lows))
        tlow = _max_opt(self.tlow, other.tlow)
        pmaxs = tuple(_max_opt(a, b) for a, b in zip(self.pmaxs, other.pmaxs))
        tpmax = _max_opt(self.tpmax, other.tpmax)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, ZERO) + v
        return MultiSeries(self.nv, out, lows, tlow, pmaxs, tpmax)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries(self.nv, {k: -v for k, v in self.c.items()},
                           self.lows, self.tlow, self.pmaxs, self.tpmax)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, SitePolynomial)):
            other = MultiSeries.constant(
                other if isinstance(other, SitePolynomial) else SitePolynomial.const(other),
                self.nv,
            )
        return self + (-other)

    def scale(self, p) -> "MultiSeries":
        if isinstance(p, (int, Fraction)):
            p = SitePolynomial.const(p)
        return MultiSeries(self.nv, {k: v * p for k, v in self.c.items()},
                           self.lows, self.tlow, self.pmaxs, self.tpmax)

    def mul(self, other: "MultiSeries", floors: Optional[Sequence[Optional[int]]] = None,
            tfloor: Optional[int] = None) -> "MultiSeries":
        """Product; optional floors prune (and weaken validity) further."""
        self._check(other)
        lows = []
        for i in range(self.nv):
            lo = _max_opt(_mul_channel(self.lows[i], other.pmaxs[i]),
                          _mul_channel(other.lows[i], self.pmaxs[i]))
            if floors is not None:
                lo = _max_opt(lo, floors[i])
            lows.append(lo)
        tlow = _max_opt(_mul_channel(self.tlow, other.tpmax),
                        _mul_channel(other.tlow, self.tpmax))
        tlow = _max_opt(tlow, tfloor)
        if self.tpmax is None or other.tpmax is None:
            return MultiSeries(self.nv, {}, lows, tlow, [None] * self.nv, None)
        pmaxs = tuple(a + b for a, b in zip(self.pmaxs, other.pmaxs))
        tpmax = self.tpmax + other.tpmax
        out: dict = {}
        items2 = list(other.c.items())
        for k1, v1 in self.c.items():
            for k2, v2 in items2:
                key = tuple(a + b for a, b in zip(k1, k2))
                skip = False
                if tlow is not None and sum(key) < tlow:
                    skip = True
                else:
                    for q, lo in zip(key, lows):
                        if lo is not None and q < lo:
                            skip = True
                            break
                if skip:
                    continue
                prod = v1 * v2
                if key in out:
                    out[key] = out[key] + prod
                else:
                    out[key] = prod
        return MultiSeries(self.nv, out, lows, tlow, pmaxs, tpmax)

    def __mul__(self, other):
        if isinstance(other, MultiSeries):
            return self.mul(other)
        if isinstance(other, (int, Fraction, SitePolynomial)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    # -- reshaping ---------------------------------------------------------------
    def shift_sites(self, d: int) -> "MultiSeries":
        return MultiSeries(self.nv, {k: v.shift(d) for k, v in self.c.items()},
                           self.lows, self.tlow, self.pmaxs, self.tpmax)

    def permute_vars(self, perm: Sequence[int]) -> "MultiSeries":
        """Rename variables: new variable i is old variable perm[i]."""
        inv = [0] * self.nv
        for i, p in enumerate(perm):
            inv[p] = i
        remap = lambda key: tuple(key[perm[i]] for i in range(self.nv))
        return MultiSeries(
            self.nv,
            {remap(k): v for k, v in self.c.items()},
            [self.lows[perm[i]] for i in range(self.nv)],
            self.tlow,
            [self.pmaxs[perm[i]] for i in range(self.nv)],
            self.tpmax,
        )

    def map_coeffs(self, f) -> "MultiSeries":
        out = {k: f(v) for k, v in self.c.items()}
        return MultiSeries(self.nv, {k: v for k, v in out.items() if v},
                           self.lows, self.tlow, self.pmaxs, self.tpmax)

    def restrict(self, pred) -> "MultiSeries":
        return MultiSeries(self.nv, {k: v for k, v in self.c.items() if pred(k)},
                           self.lows, self.tlow, self.pmaxs, self.tpmax)

    def is_zero_within_window(self) -> bool:
        return not self.c

    def __repr__(self):
        n = len(self.c)
        return f"MultiSeries(nv={self.nv}, terms={n}, lows={self.lows}, tlow={self.tlow})"


# two-variable instances of MultiSeries play the role of a dedicated pair
# type everywhere (generating kernels in two spectral variables)
BiSeries = MultiSeries


def divide_by_sq_diff(S: MultiSeries, floor0: Optional[int] = None) -> MultiSeries:
    """Divide a bi-series by (lambda-mu)^2 in the region |mu| < |lambda|.

    Multiplies by the expansion lambda^-2 sum_{m>=1} m (mu/lambda)^(m-1) and
    asserts that, within the valid window, only powers <= -2 survive in each
    variable; otherwise raises NotCleanlyDivisible.

    The quotient coefficient at (q0, q1) reads input coefficients of constant
    total degree q0+q1+2 at first-variable powers >= q0+2, which gives a
    box-plus-total-degree valid window for the result.  ``floor0`` truncates
    the first variable from below; it is mandatory for inputs that are exact
    in the first variable (the quotient is an infinite series there).
    """
    if S.nv != 2:
        raise AlgebraError("divide_by_sq_diff expects a bi-series")
    lo0, lo1 = S.lows
    pm0, pm1 = S.pmaxs
    if lo0 is not None:
        floor0 = lo0 - 2 if floor0 is None else max(floor0, lo0 - 2)
    if floor0 is None:
        raise AlgebraError(
            "divide_by_sq_diff needs floor0 for inputs exact in the first variable"
        )
    tlow = None if S.tlow is None else S.tlow - 2
    if lo1 is not None and pm0 is not None:
        tlow = _max_opt(tlow, lo1 + pm0 - 2)
    if lo0 is not None and pm1 is not None:
        tlow = _max_opt(tlow, lo0 + pm1 - 2)
    lows = (floor0, lo1)
    out: dict = {}
    for (p0, p1), v in S.c.items():
        m = 1
        while True:
            q0 = p0 - m - 1
            if q0 < floor0:
                break
            q1 = p1 + m - 1
            if (tlow is None or q0 + q1 >= tlow) and (lo1 is None or q1 >= lo1):
                key = (q0, q1)
                term = v * m
                if key in out:
                    out[key] = out[key] + term
                else:
                    out[key] = term
            m += 1
    T = MultiSeries(2, out, lows, tlow, (-2, -2), -4)
    for (q0, q1), v in T.c.items():
        if (q0 >= -1 or q1 >= -1) and v:
            raise NotCleanlyDivisible(
                f"power ({q0},{q1}) with coefficient {v.to_text()} survives the division"
            )
    return T


class Matrix2:
    """2x2 matrix over any ring elements supporting + and *."""

    __slots__ = ("a11", "a12", "a21", "a22")

    def __init__(self, a11, a12, a21, a22):
        self.a11, self.a12, self.a21, self.a22 = a11, a12, a21, a22

    def __add__(self, other: "Matrix2"):
        return Matrix2(self.a11 + other.a11, self.a12 + other.a12,
                       self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other: "Matrix2"):
        return Matrix2(self.a11 - other.a11, self.a12 - other.a12,
                       self.a21 - other.a21, self.a22 - other.a22)

    def __mul__(self, other: "Matrix2"):
        return Matrix2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def trace(self):
        return self.a11 + self.a22

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def map(self, f) -> "Matrix2":
        return Matrix2(f(self.a11), f(self.a12), f(self.a21), f(self.a22))

    def entries(self):
        return ((1, 1, self.a11), (1, 2, self.a12), (2, 1, self.a21), (2, 2, self.a22))
