"""Linear differential operators in (t, x, y) with polynomial coefficients.

An operator is ``sum f_abc(t,x,y) Dt^a Dx^b Dy^c`` stored as a dict from
``(a, b, c)`` to :class:`Poly`.  Composition uses the multivariate
Leibniz rule.  This module also realises the four-generator algebra as
operators, provides the equation operator ``F = Dt + x Dy - Dx^2`` and
the Lie-symmetry operators, and reduces operators modulo the right
ideal generated by ``F``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

from .errors import DomainError
from .linalg import sparse_nullspace
from .parse import Grammar, format_rational, parse_with
from .poly import NEG_INF, TXY, Poly, monomial_key
from .weyl import GENS, WeylElem, casimir, hat_d, hat_k, hat_pt, monomials_deg

DERIVS = ("Dt", "Dx", "Dy")
_ONE = Poly.const(1)


def _as_poly(c) -> Poly:
    if isinstance(c, Poly):
        if c.ring != TXY:
            raise DomainError("operator coefficients live in the (t, x, y) ring")
        return c
    return Poly.const(c)


class DiffOp:
    """Immutable differential operator with (t, x, y)-polynomial coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != 3 or min(idx) < 0:
                raise DomainError(f"bad derivative multi-index {idx}")
            c = _as_poly(c)
            if c:
                clean[idx] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "DiffOp":
        op = object.__new__(cls)
        op.terms = terms
        op._hash = None
        return op

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls._raw({})

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls._raw({(0, 0, 0): _ONE})

    @classmethod
    def mult(cls, p) -> "DiffOp":
        """Multiplication by a polynomial."""
        p = _as_poly(p)
        return cls._raw({(0, 0, 0): p} if p else {})

    @classmethod
    def d(cls, a: int = 0, b: int = 0, c: int = 0, coeff=1) -> "DiffOp":
        return cls({(a, b, c): coeff})

    # -- queries ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def order(self):
        if not self.terms:
            return NEG_INF
        return max(sum(i) for i in self.terms)

    def has_dt(self) -> bool:
        return any(i[0] for i in self.terms)

    def coeff(self, idx: tuple) -> Poly:
        return self.terms.get(tuple(idx), Poly.zero())

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda ic: monomial_key(ic[0]), reverse=True)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, DiffOp):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return DiffOp.mult(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for i, c in other.terms.items():
            v = out[i] + c if i in out else c
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return DiffOp._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp._raw({i: -c for i, c in self.terms.items()})

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

    def scale(self, c) -> "DiffOp":
        c = Fraction(c)
        if not c:
            return DiffOp.zero()
        return DiffOp._raw({i: p.scale(c) for i, p in self.terms.items()})

    def __mul__(self, other):
        """Composition ``self o other`` (scalars and polynomials act as multipliers)."""
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return compose(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return compose(other, self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("operator powers need a non-negative integer exponent")
        out = DiffOp.identity()
        for _ in range(k):
            out = compose(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- application -------------------------------------------------------
    def apply_poly(self, p: Poly) -> Poly:
        out = Poly.zero()
        for (a, b, c), f in self.terms.items():
            q = p.diff("t", a).diff("x", b).diff("y", c)
            if q:
                out = out + f * q
        return out

    # -- text and JSON ---------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for idx, f in self.sorted_terms():
            dpart = "*".join(
                d if e == 1 else f"{d}^{e}" for d, e in zip(DERIVS, idx) if e
            )
            items = f.sorted_terms()
            if not dpart:
                for m, c in items:
                    out.append((c, f._mono_text(m)))
            elif len(items) == 1:
                m, c = items[0]
                mono = f._mono_text(m)
                out.append((c, f"{mono}*{dpart}" if mono else dpart))
            else:
                out.append((Fraction(1), f"({f.to_text(sep='')})*{dpart}"))
        text = []
        for n, (c, body) in enumerate(out):
            neg = c < 0
            a = -c if neg else c
            piece = body if (body and a == 1) else (f"{format_rational(a)}*{body}" if body else format_rational(a))
            if n == 0:
                text.append(("-" if neg else "") + piece)
            else:
                text.append((" - " if neg else " + ") + piece)
        return "".join(text)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"DiffOp({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"deriv": list(idx), "coeff": f.to_json()["terms"]} for idx, f in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DiffOp":
        return cls({tuple(t["deriv"]): Poly.from_json({"terms": t["coeff"]}) for t in data["terms"]})


def _leibniz_term(f: Poly, alpha: tuple, g: Poly, beta: tuple, out: dict):
    # f D^alpha o g D^beta = sum_gamma C(alpha, gamma) f (D^gamma g) D^(alpha - gamma + beta)
    a0, a1, a2 = alpha
    for g0 in range(a0 + 1):
        dg0 = g.diff("t", g0) if g0 else g
        if not dg0:
            break
        for g1 in range(a1 + 1):
            dg1 = dg0.diff("x", g1) if g1 else dg0
            if not dg1:
                break
            for g2 in range(a2 + 1):
                dg = dg1.diff("y", g2) if g2 else dg1
                if not dg:
                    break
                k = comb(a0, g0) * comb(a1, g1) * comb(a2, g2)
                idx = (a0 - g0 + beta[0], a1 - g1 + beta[1], a2 - g2 + beta[2])
                term = (f * dg).scale(k)
                out[idx] = out[idx] + term if idx in out else term


def compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """The operator product ``A o B``."""
    out: dict = {}
    for alpha, f in A.terms.items():
        for beta, g in B.terms.items():
            _leibniz_term(f, alpha, g, beta, out)
    return DiffOp._raw({i: c for i, c in out.items() if c})


def op_commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    return compose(A, B) - compose(B, A)


_t, _x, _y = Poly.var("t"), Poly.var("x"), Poly.var("y")
Dt = DiffOp.d(1, 0, 0)
Dx = DiffOp.d(0, 1, 0)
Dy = DiffOp.d(0, 0, 1)


def op_F() -> DiffOp:
    """``Dt + x Dy - Dx^2``."""
    return Dt + DiffOp.d(0, 0, 1, _x) - DiffOp.d(0, 2, 0)


def generator_op(name: str) -> DiffOp:
    if name == "P3":
        return DiffOp({(0, 1, 0): 3 * _t ** 2, (0, 0, 1): _t ** 3, (0, 0, 0): -3 * (_y - _t * _x)})
    if name == "P2":
        return DiffOp({(0, 1, 0): 2 * _t, (0, 0, 1): _t ** 2, (0, 0, 0): _x})
    if name == "P1":
        return DiffOp({(0, 1, 0): 1, (0, 0, 1): _t})
    if name == "P0":
        return DiffOp({(0, 0, 1): 1})
    raise DomainError(f"unknown generator {name!r}")


@lru_cache(maxsize=None)
def _gen_power(i: int, k: int) -> DiffOp:
    if k == 0:
        return DiffOp.identity()
    return compose(_gen_power(i, k - 1), generator_op(GENS[i]))


@lru_cache(maxsize=1 << 12)
def realize_monomial(m: tuple) -> DiffOp:
    """``P3^i3 o P2^i2 o P1^i1 o P0^i0`` composed in the written order."""
    for i, e in enumerate(m):
        if e:
            rest = tuple(0 if j <= i else m[j] for j in range(4))
            if not any(rest):
                return _gen_power(i, e)
            return compose(_gen_power(i, e), realize_monomial(rest))
    return DiffOp.identity()


def realize(a: WeylElem) -> DiffOp:
    out = DiffOp.zero()
    for m, c in a.terms.items():
        out = out + realize_monomial(m).scale(c)
    return out


def commutes_with_F(A: DiffOp) -> bool:
    return op_commutator(op_F(), A).is_zero()


def reduce_mod_F_with_quotient(A: DiffOp) -> tuple[DiffOp, DiffOp]:
    """Return ``(R, G)`` with ``A = G o F + R`` and ``R`` free of ``Dt``.

    Highest ``Dt`` powers are removed first; ``f Dt^a Dx^b Dy^c`` is traded
    for ``f Dt^(a-1) Dx^b Dy^c o (Dx^2 - x Dy)``.
    """
    tail = DiffOp.d(0, 2, 0) - DiffOp.d(0, 0, 1, _x)
    rem = dict(A.terms)
    quotient: dict = {}
    while True:
        dts = [i for i in rem if i[0]]
        if not dts:
            break
        top = max(i[0] for i in dts)
        for idx in [i for i in dts if i[0] == top]:
            f = rem.pop(idx)
            lower = (idx[0] - 1, idx[1], idx[2])
            quotient[lower] = quotient[lower] + f if lower in quotient else f
            for j, g in compose(DiffOp._raw({lower: f}), tail).terms.items():
                v = rem[j] + g if j in rem else g
                if v:
                    rem[j] = v
                else:
                    rem.pop(j, None)
    return DiffOp._raw(rem), DiffOp._raw({i: c for i, c in quotient.items() if c})


def reduce_mod_F(A: DiffOp) -> DiffOp:
    return reduce_mod_F_with_quotient(A)[0]


# -- Lie-symmetry operators and the structure-constant table ---------------

LIE_NAMES = ("Pt", "D", "K", "P3", "P2", "P1", "P0", "I")


def lie_ops() -> dict:
    ops = {
        "Pt": Dt,
        "D": DiffOp({(1, 0, 0): 2 * _t, (0, 1, 0): _x, (0, 0, 1): 3 * _y, (0, 0, 0): 2}),
        "K": DiffOp(
            {
                (1, 0, 0): _t ** 2,
                (0, 1, 0): _t * _x + 3 * _y,
                (0, 0, 1): 3 * _t * _y,
                (0, 0, 0): _x ** 2 + 2 * _t,
            }
        ),
        "I": DiffOp.mult(-1),
    }
    for g in GENS:
        ops[g] = generator_op(g)
    return {n: ops[n] for n in LIE_NAMES}


#: Nonzero brackets of the basis vector fields, one entry per unordered pair.
STRUCTURE_TABLE = {
    ("Pt", "D"): {"Pt": 2},
    ("Pt", "K"): {"D": 1},
    ("D", "K"): {"K": 2},
    ("Pt", "P3"): {"P2": 3},
    ("Pt", "P2"): {"P1": 2},
    ("Pt", "P1"): {"P0": 1},
    ("D", "P3"): {"P3": 3},
    ("D", "P2"): {"P2": 1},
    ("D", "P1"): {"P1": -1},
    ("D", "P0"): {"P0": -3},
    ("K", "P2"): {"P3": -1},
    ("K", "P1"): {"P2": -2},
    ("K", "P0"): {"P1": -3},
    ("P1", "P2"): {"I": -1},
    ("P0", "P3"): {"I": 3},
}


def expected_bracket(a: str, b: str) -> dict:
    if (a, b) in STRUCTURE_TABLE:
        return dict(STRUCTURE_TABLE[(a, b)])
    if (b, a) in STRUCTURE_TABLE:
        return {k: -v for k, v in STRUCTURE_TABLE[(b, a)].items()}
    return {}


def structure_constants_check() -> list:
    """Check every ordered pair of the eight operators against the table.

    Returns one dict per pair with the computed bracket, the expected
    combination (with ``I`` realised as ``-1``) and a ``pass`` flag.
    """
    ops = lie_ops()
    rows = []
    for a in LIE_NAMES:
        for b in LIE_NAMES:
            got = op_commutator(ops[a], ops[b])
            exp = expected_bracket(a, b)
            want = DiffOp.zero()
            for name, c in exp.items():
                want = want + ops[name].scale(c)
            rows.append({"pair": (a, b), "expected": exp, "got": got, "pass": got == want})
    return rows


def hat_identities() -> list:
    """``(name, reduced, hat image, quotient, expected quotient, ok)`` for Pt, D, K."""
    ops = lie_ops()
    out = []
    for name, hat, q in (
        ("Pt", hat_pt(), DiffOp.identity()),
        ("D", hat_d(), DiffOp.mult(2 * _t)),
        ("K", hat_k(), DiffOp.mult(_t ** 2)),
    ):
        red, quo = reduce_mod_F_with_quotient(ops[name])
        img = realize(hat)
        diff_ok = ops[name] - img == compose(q, op_F())
        out.append(
            {
                "name": name,
                "reduced": red,
                "realized_hat": img,
                "quotient": quo,
                "reduce_ok": red == img,
                "identity_ok": diff_ok and quo == q,
            }
        )
    return out


# -- brute-force order oracle ------------------------------------------------

def order_oracle(n: int) -> dict:
    """Dimension of the elements of degree <= n + n//3 realising order <= n.

    Every monomial of that degree is realised; the kernel of the map to the
    coefficients of derivative terms of order > n is computed exactly.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    bound = n + n // 3
    monos = monomials_deg(bound)
    row_index: dict = {}
    rows: list = []
    for j, m in enumerate(monos):
        op = realize_monomial(m)
        for idx, f in op.terms.items():
            if sum(idx) <= n:
                continue
            for pm, c in f.terms.items():
                key = (idx, pm)
                r = row_index.get(key)
                if r is None:
                    r = row_index[key] = len(rows)
                    rows.append({})
                rows[r][j] = c
    kernel = sparse_nullspace(rows, len(monos))
    return {"n": n, "degree_bound": bound, "monomials": len(monos), "dimension": len(kernel)}


# -- parsing ---------------------------------------------------------------

def _op_name(ident: str) -> DiffOp:
    if ident in TXY:
        return DiffOp.mult(Poly.var(ident))
    if ident in DERIVS:
        return DiffOp.d(*[1 if d == ident else 0 for d in DERIVS])
    raise DomainError(f"unknown identifier {ident!r}")


OP_GRAMMAR = Grammar(number=DiffOp.mult, name=_op_name, power=lambda a, k: a ** k)


def parse_diffop(text: str) -> DiffOp:
    """Parse operator text; juxtaposed factors compose left to right."""
    return parse_with(text, OP_GRAMMAR)


def realized_casimir() -> DiffOp:
    return realize(casimir())
