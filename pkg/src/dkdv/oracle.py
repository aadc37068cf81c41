"""Independent brute-force ground truth for the matrix-model correlators.

A gluing of k even-valency stars is a fixed-point-free involution on the
labelled half-edges; its faces are the cycles of rotation-then-involution,
and the surface genus comes from the Euler relation.  Full moments, connected
cumulants (two routes) and the per-genus census all come from direct
enumeration, with no input from the closed-form side of the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from .algebra import Coeff, SitePolynomial, ZERO, x_pow

__all__ = [
    "GluingCensus",
    "TooLarge",
    "RouteMismatch",
    "wick_moment",
    "connected_cumulant",
    "census",
    "direct_expectation",
]

MAX_HALF_EDGES = 16


class TooLarge(Exception):
    """Enumeration bound exceeded (half-edge count over the limit)."""


class RouteMismatch(Exception):
    """The two connectedness routes disagree (would signal a bug)."""


def _check_valencies(valencies: Sequence[int]) -> Tuple[int, ...]:
    vs = tuple(valencies)
    if not vs or any(v <= 0 or v % 2 for v in vs):
        raise ValueError("valencies must be positive even integers")
    if sum(vs) > MAX_HALF_EDGES:
        raise TooLarge(f"{sum(vs)} half-edges exceeds the bound {MAX_HALF_EDGES}")
    return vs


def _rotation(valencies: Sequence[int]) -> List[int]:
    """Successor map of the vertex rotations on consecutively numbered half-edges."""
    rot = []
    start = 0
    for v in valencies:
        for i in range(v):
            rot.append(start + (i + 1) % v)
        start += v
    return rot


def _vertex_of(valencies: Sequence[int]) -> List[int]:
    owner = []
    for vi, v in enumerate(valencies):
        owner.extend([vi] * v)
    return owner


def _pairings(points: Tuple[int, ...]) -> Iterator[List[Tuple[int, int]]]:
    """All fixed-point-free involutions as pair lists (first point leads)."""
    if not points:
        yield []
        return
    a = points[0]
    rest = points[1:]
    for i, b in enumerate(rest):
        sub = rest[:i] + rest[i + 1:]
        for tail in _pairings(sub):
            yield [(a, b)] + tail


def _faces(rot: List[int], pairs: List[Tuple[int, int]]) -> int:
    n = len(rot)
    inv = [0] * n
    for a, b in pairs:
        inv[a] = b
        inv[b] = a
    seen = [False] * n
    faces = 0
    for s in range(n):
        if seen[s]:
            continue
        faces += 1
        h = s
        while not seen[h]:
            seen[h] = True
            h = rot[inv[h]]
    return faces


def _connected(owner: List[int], k: int, pairs: List[Tuple[int, int]]) -> bool:
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    comps = k
    for a, b in pairs:
        ra, rb = find(owner[a]), find(owner[b])
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


@dataclass(frozen=True)
class GluingCensus:
    valencies: Tuple[int, ...]
    by_genus: Dict[int, int]  # connected gluing counts

    @property
    def half_edges(self) -> int:
        return sum(self.valencies)

    def a_values(self) -> Dict[int, Coeff]:
        import math

        kfact = math.factorial(len(self.valencies))
        out = {}
        for g, n in sorted(self.by_genus.items()):
            v = Fraction(n, kfact)
            out[g] = v.numerator if v.denominator == 1 else v
        return out


@lru_cache(maxsize=None)
def _enumerate(valencies: Tuple[int, ...]):
    """One pass over all gluings: full moment and the connected census."""
    vs = _check_valencies(valencies)
    rot = _rotation(vs)
    owner = _vertex_of(vs)
    k = len(vs)
    edges = sum(vs) // 2
    moment: Dict[int, int] = {}
    conn: Dict[int, int] = {}
    census_by_genus: Dict[int, int] = {}
    for pairs in _pairings(tuple(range(sum(vs)))):
        f = _faces(rot, pairs)
        moment[f] = moment.get(f, 0) + 1
        if _connected(owner, k, pairs):
            conn[f] = conn.get(f, 0) + 1
            euler = k - edges + f
            if euler % 2:
                raise ArithmeticError("odd Euler characteristic in a gluing")
            g = (2 - euler) // 2
            if g < 0:
                raise ArithmeticError("negative genus in a gluing")
            census_by_genus[g] = census_by_genus.get(g, 0) + 1
    return moment, conn, census_by_genus


def wick_moment(valencies: Sequence[int]) -> SitePolynomial:
    """Full (disconnected included) moment of a product of even traces."""
    vs = _check_valencies(valencies)
    moment, _, _ = _enumerate(vs)
    out = ZERO
    for f, n in sorted(moment.items()):
        out = out + n * x_pow(f)
    return out


def _connected_poly(valencies: Tuple[int, ...]) -> SitePolynomial:
    _, conn, _ = _enumerate(valencies)
    out = ZERO
    for f, n in sorted(conn.items()):
        out = out + n * x_pow(f)
    return out


def _partitions(items: Tuple[int, ...]) -> Iterator[List[Tuple[int, ...]]]:
    """Set partitions of a tuple of positions."""
    if not items:
        yield []
        return
    first = items[0]
    rest = items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]
        yield [(first,)] + part


def connected_cumulant(valencies: Sequence[int]) -> SitePolynomial:
    """Connected cumulant via two independent routes, compared exactly.

    Route a restricts the gluing sum to involutions joining all vertices;
    route b is moment-to-cumulant inversion over set partitions of the
    traces.
    """
    vs = _check_valencies(valencies)
    via_gluings = _connected_poly(vs)
    via_moebius = ZERO
    import math

    for part in _partitions(tuple(range(len(vs)))):
        sign = (-1) ** (len(part) - 1) * math.factorial(len(part) - 1)
        prod = SitePolynomial.const(sign)
        for block in part:
            prod = prod * wick_moment(tuple(vs[i] for i in block))
        via_moebius = via_moebius + prod
    if not (via_gluings == via_moebius):
        raise RouteMismatch(
            f"gluing route {via_gluings.to_text()} != inversion route "
            f"{via_moebius.to_text()} for valencies {vs}")
    return via_gluings


def census(valencies: Sequence[int]) -> GluingCensus:
    """Connected gluings per genus; a-values are counts over k factorial."""
    vs = _check_valencies(valencies)
    _, _, by_genus = _enumerate(vs)
    return GluingCensus(vs, dict(sorted(by_genus.items())))


def direct_expectation(valencies: Sequence[int], n: int) -> int:
    """Slow second oracle: expectation by explicit index summation for an
    n x n matrix, using only the second-moment rule for entries."""
    vs = _check_valencies(valencies)
    if sum(vs) > 8:
        raise TooLarge("direct index summation is limited to 8 half-edges")
    import itertools as it

    H = sum(vs)
    rot = _rotation(vs)
    total = 0
    pair_list = list(_pairings(tuple(range(H))))
    for idx in it.product(range(n), repeat=H):
        # factor h carries M[idx[h], idx[rot[h]]]
        for pairs in pair_list:
            prod = 1
            for a, b in pairs:
                if idx[a] != idx[rot[b]] or idx[rot[a]] != idx[b]:
                    prod = 0
                    break
            total += prod
    return total
