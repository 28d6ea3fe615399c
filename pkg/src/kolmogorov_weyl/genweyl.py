"""The n-th Weyl algebra in the ``q^kappa p^lambda`` basis.

Generators ``q_1..q_n, p_1..p_n`` with ``[p_i, q_j] = delta_ij`` and all
other pairs commuting.  This engine shares no code with :mod:`weyl` and
is used to cross-check it through the isomorphism

    P3 -> 3 p1,  P2 -> q2,  P1 -> p2,  P0 -> q1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Mapping

from .errors import DomainError
from .parse import join_terms


@lru_cache(maxsize=1 << 16)
def _mono_mul(k1: tuple, l1: tuple, k2: tuple, l2: tuple) -> tuple:
    # q^k1 p^l1 q^k2 p^l2: move p^l1 past q^k2 one index at a time
    per_index = []
    for l, k in zip(l1, k2):
        per_index.append([(v, factorial(v) * comb(l, v) * comb(k, v)) for v in range(min(l, k) + 1)])
    out = []
    for choice in product(*per_index):
        coeff = 1
        for _, c in choice:
            coeff *= c
        nu = tuple(v for v, _ in choice)
        kappa = tuple(a + b - v for a, b, v in zip(k1, k2, nu))
        lam = tuple(a + b - v for a, b, v in zip(l1, l2, nu))
        out.append(((kappa, lam), coeff))
    return tuple(out)


class GenWeylElem:
    """Immutable element ``sum c * q^kappa p^lambda`` of the rank-n Weyl algebra."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        if n < 1:
            raise DomainError("rank must be >= 1")
        self.n = n
        clean = {}
        for (kappa, lam), c in (terms or {}).items():
            kappa, lam = tuple(kappa), tuple(lam)
            if len(kappa) != n or len(lam) != n or min(kappa + lam) < 0:
                raise DomainError(f"bad multi-index pair {(kappa, lam)} for rank {n}")
            c = Fraction(c)
            if c:
                clean[(kappa, lam)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "GenWeylElem":
        e = object.__new__(cls)
        e.n = n
        e.terms = terms
        return e

    @classmethod
    def const(cls, n: int, c=1) -> "GenWeylElem":
        return cls(n, {((0,) * n, (0,) * n): c})

    @classmethod
    def q(cls, n: int, i: int) -> "GenWeylElem":
        k = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, {(k, (0,) * n): 1})

    @classmethod
    def p(cls, n: int, i: int) -> "GenWeylElem":
        l = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, {((0,) * n, l): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "GenWeylElem"):
        if self.n != other.n:
            raise DomainError(f"rank mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "GenWeylElem") -> "GenWeylElem":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GenWeylElem._raw(self.n, out)

    def __neg__(self):
        return GenWeylElem._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GenWeylElem":
        c = Fraction(c)
        return GenWeylElem._raw(self.n, {m: v * c for m, v in self.terms.items() if v * c})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return gen_weyl_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, GenWeylElem):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        def key(item):
            (k, l), _ = item
            return (sum(k) + sum(l), k, l)

        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self) -> str:
        pieces = []
        for (k, l), c in self.sorted_terms():
            parts = []
            for name, exps in (("q", k), ("p", l)):
                for i, e in enumerate(exps, 1):
                    if e:
                        parts.append(f"{name}{i}" + (f"^{e}" if e > 1 else ""))
            pieces.append((c, "*".join(parts)))
        return join_terms(pieces)

    __repr__ = __str__


def gen_weyl_mul(a: GenWeylElem, b: GenWeylElem) -> GenWeylElem:
    a._check(b)
    out: dict = {}
    for (k1, l1), c1 in a.terms.items():
        for (k2, l2), c2 in b.terms.items():
            c12 = c1 * c2
            for m, c in _mono_mul(k1, l1, k2, l2):
                out[m] = out.get(m, 0) + c12 * c
    return GenWeylElem._raw(a.n, {m: c for m, c in out.items() if c})


def gen_weyl_commutator(a: GenWeylElem, b: GenWeylElem) -> GenWeylElem:
    return gen_weyl_mul(a, b) - gen_weyl_mul(b, a)


def _multi_comb(a: tuple, v: tuple) -> int:
    out = 1
    for x, y in zip(a, v):
        out *= comb(x, y)
    return out


def commutator_formula(kappa, lam, kappa2, lam2) -> GenWeylElem:
    """``[q^kappa p^lam, q^kappa2 p^lam2]`` from the closed sum over nu."""
    n = len(kappa)
    out: dict = {}
    ranges = [range(max(a, b, c, d) + 1) for a, b, c, d in zip(kappa, lam, kappa2, lam2)]
    for nu in product(*ranges):
        nf = 1
        for v in nu:
            nf *= factorial(v)
        c = nf * (_multi_comb(kappa2, nu) * _multi_comb(lam, nu) - _multi_comb(kappa, nu) * _multi_comb(lam2, nu))
        if not c:
            continue
        k = tuple(a + b - v for a, b, v in zip(kappa, kappa2, nu))
        l = tuple(a + b - v for a, b, v in zip(lam, lam2, nu))
        out[(k, l)] = out.get((k, l), 0) + c
    return GenWeylElem(n, out)


# -- isomorphism with the four-generator algebra ----------------------------

def _images():
    q1, q2 = GenWeylElem.q(2, 0), GenWeylElem.q(2, 1)
    p1, p2 = GenWeylElem.p(2, 0), GenWeylElem.p(2, 1)
    return (p1.scale(3), q2, p2, q1)


def _power(x: GenWeylElem, k: int) -> GenWeylElem:
    out = GenWeylElem.const(x.n)
    for _ in range(k):
        out = gen_weyl_mul(out, x)
    return out


@lru_cache(maxsize=1 << 12)
def _to_w2_mono(m: tuple) -> GenWeylElem:
    out = GenWeylElem.const(2)
    for img, e in zip(_images(), m):
        if e:
            out = gen_weyl_mul(out, _power(img, e))
    return out


def to_w2(a) -> GenWeylElem:
    """Image in the rank-2 Weyl algebra of an element of the four-generator algebra."""
    out = GenWeylElem._raw(2, {})
    for m, c in a.terms.items():
        out = out + _to_w2_mono(m).scale(c)
    return out


@lru_cache(maxsize=1 << 12)
def _from_w2_mono(kappa: tuple, lam: tuple):
    from .weyl import P0, P1, P2, P3, ONE, weyl_power

    out = ONE
    # q1^k1 q2^k2 p1^l1 p2^l2  ->  P0^k1 P2^k2 (P3/3)^l1 P1^l2
    for g, e in ((P0, kappa[0]), (P2, kappa[1]), (P3.scale(Fraction(1, 3)), lam[0]), (P1, lam[1])):
        if e:
            out = out * weyl_power(g, e)
    return out


def from_w2(a: GenWeylElem):
    from .weyl import WeylElem

    if a.n != 2:
        raise DomainError("only rank-2 elements map back")
    out = WeylElem.zero()
    for (k, l), c in a.terms.items():
        out = out + _from_w2_mono(k, l).scale(c)
    return out
