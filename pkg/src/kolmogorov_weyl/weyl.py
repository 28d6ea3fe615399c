"""The algebra generated by P3, P2, P1, P0 with [P3,P0] = 3, [P1,P2] = 1.

Elements are stored in the ordered monomial basis
``P3^i3 * P2^i2 * P1^i1 * P0^i0`` keyed by the tuple ``(i3, i2, i1, i0)``.
All other generator pairs commute, so the algebra is two independent
Weyl pairs glued together:

* ``A = P3, B = P0`` with ``[A, B] = 3``
* ``A = P2, B = P1`` with ``[A, B] = -1``

and the product of two monomials only has to move ``P0`` past ``P3`` and
``P1`` past ``P2``.  :func:`pair_reorder` gives that in closed form.
"""

from __future__ import annotations

import time
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainError
from .linalg import MatrixQ, nullspace, rank, rref_int, _integer_row
from .parse import Grammar, join_terms, parse_with
from .poly import NEG_INF, monomial_key, monomials_upto

GENS = ("P3", "P2", "P1", "P0")
C30 = Fraction(3)  # [P3, P0]
C21 = Fraction(-1)  # [P2, P1]


@lru_cache(maxsize=None)
def pair_reorder(b_exp: int, a_exp: int, c: Fraction) -> dict:
    """Normal form of ``B^b A^a`` for a Weyl pair with ``[A, B] = c``.

    Returns ``{(a - k, b - k): coeff}`` meaning ``sum coeff * A^(a-k) B^(b-k)``.
    """
    c = Fraction(c)
    out = {}
    for k in range(min(a_exp, b_exp) + 1):
        coeff = factorial(k) * comb(a_exp, k) * comb(b_exp, k) * (-c) ** k
        if coeff:
            out[(a_exp - k, b_exp - k)] = Fraction(coeff)
    return out


@lru_cache(maxsize=1 << 16)
def monomial_product(m1: tuple, m2: tuple) -> tuple:
    """Product of two basis monomials as ``((monomial, coeff), ...)``."""
    a3, a2, a1, a0 = m1
    b3, b2, b1, b0 = m2
    outer = pair_reorder(a0, b3, C30) if a0 and b3 else {(b3, a0): Fraction(1)}
    inner = pair_reorder(a1, b2, C21) if a1 and b2 else {(b2, a1): Fraction(1)}
    out = []
    for (p3, p0), c1 in outer.items():
        for (p2, p1), c2 in inner.items():
            out.append(((a3 + p3, a2 + p2, p1 + b1, p0 + b0), c1 * c2))
    return tuple(out)


def weight(m: tuple) -> int:
    """Grading weight ``i3 + i2 - i1 - i0`` of a basis monomial."""
    return m[0] + m[1] - m[2] - m[3]


def _mono_text(m: tuple) -> str:
    parts = []
    for g, e in zip(GENS, m):
        if e == 1:
            parts.append(g)
        elif e > 1:
            parts.append(f"{g}^{e}")
    return "*".join(parts)


class WeylElem:
    """Immutable element in the ordered monomial basis."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != 4 or any((not isinstance(e, int)) or e < 0 for e in m):
                    raise DomainError(f"bad monomial exponent {m}")
                c = Fraction(c)
                if c:
                    clean[m] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "WeylElem":
        e = object.__new__(cls)
        e.terms = terms
        e._hash = None
        return e

    @classmethod
    def zero(cls) -> "WeylElem":
        return cls._raw({})

    @classmethod
    def one(cls) -> "WeylElem":
        return cls.const(1)

    @classmethod
    def const(cls, c) -> "WeylElem":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def monomial(cls, i3: int = 0, i2: int = 0, i1: int = 0, i0: int = 0, coeff=1) -> "WeylElem":
        return cls({(i3, i2, i1, i0): coeff})

    @classmethod
    def gen(cls, name: str) -> "WeylElem":
        try:
            idx = GENS.index(name)
        except ValueError:
            raise DomainError(f"unknown generator {name!r}") from None
        m = [0, 0, 0, 0]
        m[idx] = 1
        return cls._raw({tuple(m): Fraction(1)})

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def coeff(self, m: tuple) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: monomial_key(mc[0]), reverse=True)

    def weights(self) -> set:
        return {weight(m) for m in self.terms}

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, WeylElem):
            return other
        if isinstance(other, (int, Fraction)):
            return WeylElem.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return WeylElem._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElem._raw({m: -c for m, c in self.terms.items()})

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

    def scale(self, c) -> "WeylElem":
        c = Fraction(c)
        if not c:
            return WeylElem.zero()
        return WeylElem._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, WeylElem):
            return NotImplemented
        return weyl_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        return weyl_power(self, k)

    def __eq__(self, other):
        if isinstance(other, WeylElem):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == WeylElem.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- text and JSON -----------------------------------------------------
    def to_text(self, sep: str = " ") -> str:
        return join_terms([(c, _mono_text(m)) for m, c in self.sorted_terms()], sep)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"WeylElem({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coeff": f"{c.numerator}/{c.denominator}", "exp": list(m)}
                for m, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WeylElem":
        return cls({tuple(t["exp"]): Fraction(t["coeff"]) for t in data["terms"]})


def weyl_mul(a: WeylElem, b: WeylElem) -> WeylElem:
    out: dict = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            c12 = c1 * c2
            for m, c in monomial_product(m1, m2):
                out[m] = out.get(m, 0) + c12 * c
    return WeylElem._raw({m: c for m, c in out.items() if c})


def weyl_commutator(a: WeylElem, b: WeylElem) -> WeylElem:
    return weyl_mul(a, b) - weyl_mul(b, a)


def weyl_power(a: WeylElem, k: int) -> WeylElem:
    if not isinstance(k, int) or k < 0:
        raise DomainError("powers need a non-negative integer exponent")
    result = WeylElem.one()
    base = a
    while k:
        if k & 1:
            result = weyl_mul(result, base)
        k >>= 1
        if k:
            base = weyl_mul(base, base)
    return result


P3 = WeylElem.gen("P3")
P2 = WeylElem.gen("P2")
P1 = WeylElem.gen("P1")
P0 = WeylElem.gen("P0")
ONE = WeylElem.one()


# -- named elements --------------------------------------------------------

def hat_pt() -> WeylElem:
    return P1 * P1 - P2 * P0


def hat_d() -> WeylElem:
    return P2 * P1 - P3 * P0 + 2


def hat_k() -> WeylElem:
    return P2 * P2 - P3 * P1


@lru_cache(maxsize=None)
def casimir() -> WeylElem:
    """``hatD^2 - 2 (hatK hatPt + hatPt hatK)`` in normal form."""
    d, k, pt = hat_d(), hat_k(), hat_pt()
    return d * d - (k * pt + pt * k).scale(2)


def s_grading() -> WeylElem:
    """Element whose adjoint action is ``-weight`` on every basis monomial."""
    return (P3 * P0).scale(Fraction(1, 3)) - P2 * P1


def h1_s11() -> WeylElem:
    return P1 - (P0 * P0).scale(Fraction(1, 6))


def h2_s11() -> WeylElem:
    return P2 + (P0 ** 3).scale(Fraction(2, 27)) - (P1 * P0).scale(Fraction(2, 3))


def h_s12() -> WeylElem:
    return P3 * P0 ** 2 - 3 * P2 * P1 * P0 + 2 * P1 ** 3


def h_s14() -> WeylElem:
    return P3 ** 2 + 3 * P3 * P1 + 3 * P2 * P0 + P0 ** 2


def s_s14() -> WeylElem:
    return (
        P3 ** 3 * P0
        - 3 * P3 ** 2 * P2 * P1
        + 2 * P3 * P2 ** 3
        + 3 * P3 * P2 ** 2 * P0
        - 6 * P3 * P2 * P1 ** 2
        - P3 * P1 ** 2 * P0
        - P3 * P0 ** 3
        + 3 * P2 ** 3 * P1
        + 6 * P2 ** 2 * P1 * P0
        - 3 * P2 * P1 ** 3
        + 3 * P2 * P1 * P0 ** 2
        - 2 * P1 ** 3 * P0
        - 4 * P3 ** 2
        + 8 * P0 ** 2
        + 12 * P2 * P0
    )


def s_s14_corrected() -> WeylElem:
    """The listed degree-4 element with ``P3 P1^2 P0`` weighted -3 instead of -1.

    With this one coefficient changed the element commutes with
    ``hatPt + hatK``; as listed it does not.
    """
    return s_s14() - 2 * P3 * P1 ** 2 * P0


NAMED: dict[str, Callable[[], WeylElem]] = {
    "P0": lambda: P0,
    "P1": lambda: P1,
    "P2": lambda: P2,
    "P3": lambda: P3,
    "hatPt": hat_pt,
    "hatD": hat_d,
    "hatK": hat_k,
    "C": casimir,
    "S": s_grading,
    "H1": h1_s11,
    "H2": h2_s11,
    "Hs12": h_s12,
    "Hs14": h_s14,
    "Ss14": s_s14,
}


def named(name: str) -> WeylElem:
    try:
        return NAMED[name]()
    except KeyError:
        raise DomainError(f"unknown identifier {name!r}") from None


def centralizer_cases() -> list:
    """``(label, B, [(name, element), ...])`` for every listed centralizer block.

    Parameters of the one-parameter blocks are sampled at a few rationals.
    """
    pt, k = hat_pt(), hat_k()
    cases = [
        ("s1.1", pt + P3, [("H1", h1_s11()), ("H2", h2_s11()), ("B", pt + P3)]),
    ]
    for delta in (Fraction(0), Fraction(1), Fraction(-5, 2)):
        b = pt + delta
        cases.append((f"s1.2 delta={delta}", b, [("P0", P0), ("hatPt", pt), ("H", h_s12())]))
    for mu in (Fraction(0), Fraction(2), Fraction(-1, 3)):
        b = pt + k + mu
        cases.append(
            (f"s1.4 mu={mu}", b, [("hatPt+hatK", pt + k), ("H", h_s14()), ("C", casimir()), ("S", s_s14())])
        )
    for eps in (Fraction(0), Fraction(1), Fraction(-7, 5)):
        b = P2 + P0.scale(eps)
        cases.append((f"s1.5 eps={eps}", b, [("P3-3eps*P1", P3 - P1.scale(3 * eps)), ("P2", P2), ("P0", P0)]))
    cases.append(("s1.6", P1, [("P3", P3), ("P1", P1), ("P0", P0)]))
    cases.append(("s1.7", P0, [("P2", P2), ("P1", P1), ("P0", P0)]))
    return cases


def centralizer_check(a: WeylElem, b: WeylElem) -> bool:
    return weyl_commutator(a, b).is_zero()


# -- parsing ---------------------------------------------------------------

def _name(ident: str) -> WeylElem:
    if ident not in NAMED:
        raise DomainError(f"unknown identifier {ident!r}")
    return named(ident)


WEYL_GRAMMAR = Grammar(number=WeylElem.const, name=_name, power=weyl_power)


def parse_weyl(text: str) -> WeylElem:
    """Parse an operator expression; products are taken in the written order."""
    return parse_with(text, WEYL_GRAMMAR)


# -- bases and dimensions ----------------------------------------------------

def monomials_deg(n: int) -> list:
    """Basis monomials of degree <= n, ascending graded-lex on (i3,i2,i1,i0)."""
    return monomials_upto(4, n)


def basis_deg(n: int) -> list:
    return [WeylElem._raw({m: Fraction(1)}) for m in monomials_deg(n)]


def basis_ord_labels(n: int) -> list:
    """``(m, monomial)`` labels of the order basis: ``C^m * monomial``."""
    labels = [(0, m) for m in monomials_deg(n)]
    for m in range(1, n // 3 + 1):
        d = n - 3 * m
        labels.extend((m, mono) for mono in monomials_deg(d) if sum(mono) == d)
    return labels


def basis_ord(n: int) -> list:
    """Basis of the elements realising operators of order <= n."""
    if n < 0:
        raise DomainError("n must be non-negative")
    c = casimir()
    cpow = {0: ONE}
    out = []
    for m, mono in basis_ord_labels(n):
        if m not in cpow:
            cpow[m] = weyl_power(c, m)
        out.append(weyl_mul(cpow[m], WeylElem._raw({mono: Fraction(1)})))
    return out


def dim_ord_closed(n: int) -> int:
    if n < 0:
        return 0
    if n % 3 == 1:
        num = (n + 2) ** 2 * (n * n + 4 * n + 5)
    else:
        num = (n + 1) * (n + 3) * (n * n + 4 * n + 6)
    assert num % 18 == 0
    return num // 18


def dim_layer_closed(n: int) -> int:
    if n < 0:
        return 0
    r = n % 3
    if r == 0:
        num = (2 * n + 3) * (n * n + 3 * n + 3)
    elif r == 1:
        num = (n + 2) * (2 * n * n + 5 * n + 5)
    else:
        num = (n + 1) * (2 * n * n + 7 * n + 8)
    assert num % 9 == 0
    return num // 9


def dim_ord_sum(n: int) -> int:
    if n < 0:
        return 0
    return sum(comb(k + 3, 3) for k in range(n + 1)) + sum(
        comb(n - 3 * k + 3, 3) for k in range(1, n // 3 + 1)
    )


def coefficient_matrix(elems: Sequence[WeylElem], monos: Sequence[tuple] | None = None):
    """Rows of normal-form coefficients over a common monomial list."""
    if monos is None:
        seen = set()
        for e in elems:
            seen.update(e.terms)
        monos = sorted(seen, key=monomial_key)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for e in elems:
        row = [Fraction(0)] * len(monos)
        for m, c in e.terms.items():
            if m not in index:
                raise DomainError(f"monomial {m} missing from the column list")
            row[index[m]] = c
        rows.append(row)
    return MatrixQ.from_rows(rows, len(monos)), list(monos)


def elements_rank(elems: Sequence[WeylElem]) -> int:
    if not elems:
        return 0
    M, _ = coefficient_matrix(elems)
    return rank(M)


def reordered_basis(order: Sequence[str], n: int) -> list:
    """Ordered products of the generators in ``order``, total degree <= n."""
    gens = [WeylElem.gen(g) for g in order]
    out = []
    for exps in monomials_deg(n):
        e = ONE
        for g, k in zip(gens, exps):
            if k:
                e = e * weyl_power(g, k)
        out.append(e)
    return out


def reordering_ranks(n: int = 4) -> dict:
    """Rank of the ordered-product basis for each of the 24 generator orders."""
    return {order: elements_rank(reordered_basis(order, n)) for order in permutations(GENS)}


# -- grading ----------------------------------------------------------------

def grading_decompose(a: WeylElem) -> dict:
    parts: dict = {}
    for m, c in a.terms.items():
        parts.setdefault(weight(m), {})[m] = c
    return {w: WeylElem._raw(t) for w, t in sorted(parts.items())}


def ad_eigenvalue(s: WeylElem, m: tuple):
    """Eigenvalue of ``ad s`` on the basis monomial ``m``, or None."""
    mono = WeylElem._raw({tuple(m): Fraction(1)})
    br = weyl_commutator(s, mono)
    if br.is_zero():
        return Fraction(0)
    if set(br.terms) != {tuple(m)}:
        return None
    return br.terms[tuple(m)]


# -- center (truncated) ------------------------------------------------------

def central_dimension(max_degree: int) -> int:
    """Dimension of the elements of degree <= max_degree commuting with all generators."""
    monos = monomials_deg(max_degree)
    brackets = []
    cols = set()
    for m in monos:
        e = WeylElem._raw({m: Fraction(1)})
        br = [weyl_commutator(g, e) for g in (P3, P2, P1, P0)]
        brackets.append(br)
        for b in br:
            cols.update(b.terms)
    cols = sorted(cols, key=monomial_key)
    idx = {m: i for i, m in enumerate(cols)}
    width = len(cols)
    # one row per (generator, output monomial), one column per input monomial
    rows = [[0] * len(monos) for _ in range(4 * width)]
    for j, br in enumerate(brackets):
        for g, b in enumerate(br):
            for m, c in b.terms.items():
                rows[g * width + idx[m]][j] = c
    return len(nullspace(MatrixQ.from_rows(rows, len(monos))))


# -- Lie closure -------------------------------------------------------------

class _Span:
    """Incrementally maintained echelon basis of sparse rational vectors."""

    def __init__(self):
        self.rows: dict = {}  # pivot -> row (dict), pivot coefficient 1

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p in sorted(self.rows, key=monomial_key, reverse=True):
            c = v.get(p)
            if c:
                for m, x in self.rows[p].items():
                    nv = v.get(m, 0) - c * x
                    if nv:
                        v[m] = nv
                    else:
                        v.pop(m, None)
        return v

    def add(self, v: dict) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = max(r, key=monomial_key)
        inv = 1 / r[p]
        r = {m: x * inv for m, x in r.items()}
        # keep rows fully reduced against the new pivot
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for m, x in r.items():
                    nv = row.get(m, 0) - c * x
                    if nv:
                        row[m] = nv
                    else:
                        row.pop(m, None)
        self.rows[p] = r
        return True


def lie_closure(
    gens: Sequence[WeylElem],
    degree_cap: int,
    iter_cap: int,
    budget_seconds: float | None = None,
    pairwise: bool = True,
) -> dict:
    """Close span(gens) under brackets, truncated by degree and iteration caps.

    Each round brackets the elements found in the previous round with
    every element found so far (``pairwise``) or only with the generators.
    Without truncation both span the generated Lie algebra; under a degree
    cap the pairwise rule reaches more, since it can combine two
    low-degree elements whose right-normed expansion passes through high
    degree.  Brackets of degree above ``degree_cap`` are dropped and counted.
    """
    if degree_cap < 1 or iter_cap < 1:
        raise DomainError("caps must be >= 1")
    start = time.monotonic()
    span = _Span()
    basis = []
    dropped = 0
    for g in gens:
        if g.degree() > degree_cap:
            dropped += 1
            continue
        if span.add(g.terms):
            basis.append(g)
    frontier = list(basis)
    rounds = 0
    complete = True
    converged = not frontier
    for _ in range(iter_cap):
        if not frontier:
            converged = True
            break
        rounds += 1
        new = []
        partners = list(basis) if pairwise else list(gens)
        for s in partners:
            for v in frontier:
                if budget_seconds is not None and time.monotonic() - start > budget_seconds:
                    complete = False
                    break
                w = weyl_commutator(s, v)
                if w.is_zero():
                    continue
                if w.degree() > degree_cap:
                    dropped += 1
                    continue
                if span.add(w.terms):
                    basis.append(w)
                    new.append(w)
            if not complete:
                break
        frontier = new
        if not complete:
            break
    else:
        converged = not frontier
    low = [WeylElem.gen(g) for g in GENS] + [ONE]
    return {
        "basis": basis,
        "dimension": len(basis),
        "low_degree_dimension": intersection_dimension(basis, low),
        "dropped": dropped,
        "rounds": rounds,
        "converged": converged,
        "complete": complete,
        "degree_cap": degree_cap,
        "iter_cap": iter_cap,
    }


def intersection_dimension(a: Sequence[WeylElem], b: Sequence[WeylElem]) -> int:
    """dim(span a  ∩  span b) = dim a + dim b - dim(a + b)."""
    return elements_rank(a) + elements_rank(b) - elements_rank(list(a) + list(b))


def sample_generators() -> list:
    """The two elements proposed as Lie generators of the whole algebra."""
    x = P3 ** 3 + P0 ** 2 + 1
    y = P2 ** 3 + P1 ** 2 + 1
    return [P3 * P0 + 5 * P2 * P1, x * y]
