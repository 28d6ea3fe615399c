"""Exact multivariate polynomials with rational coefficients.

Monomials are dense exponent tuples over an ordered variable list (the
ring).  The default ring is ``(t, x, y)``.  Terms are kept in a dict with
no zero coefficients, so equality of polynomials is equality of dicts.

Canonical text lists terms in descending graded-lex order, for example
``3*t*x^2 - 3*x*y``; :func:`parse_poly` inverts :meth:`Poly.__str__`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping, Union

from .errors import DomainError
from .parse import Grammar, join_terms, parse_with

TXY = ("t", "x", "y")

#: Degree of the zero polynomial.
NEG_INF = float("-inf")

Scalar = Union[int, Fraction]
Monomial = tuple


def monomial_key(m: Monomial):
    """Sort key realising graded-lex order (larger key = larger monomial)."""
    return (sum(m), m)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Poly:
    """Immutable polynomial over ``ring`` with Fraction coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, ring: tuple = TXY):
        self.ring = tuple(ring)
        clean = {}
        if terms:
            n = len(self.ring)
            for m, c in terms.items():
                if len(m) != n:
                    raise DomainError(f"monomial {m} does not match ring {self.ring}")
                if c:
                    clean[tuple(m)] = _as_fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, ring: tuple) -> "Poly":
        # terms already canonical: tuple keys, nonzero Fraction values
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, ring: tuple = TXY) -> "Poly":
        return cls._raw({}, tuple(ring))

    @classmethod
    def const(cls, c: Scalar, ring: tuple = TXY) -> "Poly":
        ring = tuple(ring)
        return cls({(0,) * len(ring): c}, ring)

    @classmethod
    def var(cls, name: str, ring: tuple = TXY) -> "Poly":
        ring = tuple(ring)
        if name not in ring:
            raise DomainError(f"unknown variable {name!r} for ring {ring}")
        m = tuple(1 if v == name else 0 for v in ring)
        return cls._raw({m: Fraction(1)}, ring)

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff: Scalar = 1, ring: tuple = TXY) -> "Poly":
        return cls({tuple(exps): coeff}, ring)

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def degree_in(self, var: str):
        i = self._index(var)
        if not self.terms:
            return NEG_INF
        return max(m[i] for m in self.terms)

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring), Fraction(0))

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda mc: monomial_key(mc[0]), reverse=True)

    def sort_key(self):
        return tuple((monomial_key(m), c) for m, c in self.sorted_terms())

    def _index(self, var: str) -> int:
        try:
            return self.ring.index(var)
        except ValueError:
            raise DomainError(f"unknown variable {var!r} for ring {self.ring}") from None

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise DomainError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.ring)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Scalar) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly.zero(self.ring)
        return Poly._raw({m: v * c for m, v in self.terms.items()}, self.ring)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c}, self.ring)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("polynomial powers need a non-negative integer exponent")
        result = Poly.const(1, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(other, self.ring).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution --------------------------------------
    def diff(self, var: str, times: int = 1) -> "Poly":
        i = self._index(var)
        if times == 0:
            return self
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e >= times:
                f = 1
                for j in range(times):
                    f *= e - j
                nm = m[:i] + (e - times,) + m[i + 1 :]
                out[nm] = c * f
        return Poly._raw(out, self.ring)

    def subs(self, assignments: Mapping[str, "Poly"]) -> "Poly":
        """Compose with polynomial substitutions ``var -> Poly``.

        Variables without an assignment are left in place.  All
        assigned values must live in a common ring, which becomes the
        ring of the result.
        """
        for v in assignments:
            self._index(v)
        targets = [assignments.get(v) for v in self.ring]
        out_ring = None
        for p in targets:
            if p is not None:
                if out_ring is None:
                    out_ring = p.ring
                elif p.ring != out_ring:
                    raise DomainError("substituted values live in different rings")
        if out_ring is None:
            return self
        images = []
        for v, p in zip(self.ring, targets):
            if p is None:
                if v not in out_ring:
                    raise DomainError(f"variable {v!r} has no image in ring {out_ring}")
                p = Poly.var(v, out_ring)
            images.append(p)
        powers: list[dict] = [{0: Poly.const(1, out_ring)} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        result = Poly.zero(out_ring)
        for m, c in self.terms.items():
            term = Poly.const(c, out_ring)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        vals = [_as_fraction(point[v]) for v in self.ring]
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in zip(vals, m):
                if e:
                    term *= v**e
            total += term
        return total

    # -- text and JSON ---------------------------------------------------
    def _mono_text(self, m: Monomial) -> str:
        parts = []
        for v, e in zip(self.ring, m):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    def to_text(self, sep: str = " ") -> str:
        return join_terms([(c, self._mono_text(m)) for m, c in self.sorted_terms()], sep)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "ring": list(self.ring),
            "terms": [
                {"coeff": f"{c.numerator}/{c.denominator}", "exp": list(m)}
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Poly":
        ring = tuple(data.get("ring", TXY))
        return cls({tuple(t["exp"]): Fraction(t["coeff"]) for t in data["terms"]}, ring)


def poly_grammar(ring: tuple = TXY) -> Grammar:
    ring = tuple(ring)

    def name(v):
        if v not in ring:
            raise DomainError(f"unknown variable {v!r}")
        return Poly.var(v, ring)

    return Grammar(
        number=lambda c: Poly.const(c, ring),
        name=name,
        power=lambda p, k: p**k,
    )


def parse_poly(text: str, ring: tuple = TXY) -> Poly:
    return parse_with(text, poly_grammar(ring))


def monomials_upto(nvars: int, degree: int) -> list:
    """All exponent tuples of total degree <= ``degree``, ascending graded-lex."""
    out = [m for m in product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    out.sort(key=monomial_key)
    return out


def count_monomials(nvars: int, degree: int) -> int:
    return comb(degree + nvars, nvars)
