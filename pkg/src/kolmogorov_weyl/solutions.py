"""Exact solutions of ``u_t + x u_y = u_xx`` in the exp-polynomial class.

An :class:`ExpPoly` is a finite sum ``sum exp(q_i) * p_i`` with polynomial
exponents ``q_i`` and prefactors ``p_i`` in (t, x, y).  Summands with equal
exponents are merged; ``exp(q + c) p`` and ``exp(q) (e^c p)`` are *not*
identified for a nonzero rational constant ``c`` (``e^c`` is irrational),
so group composition reports such constants separately.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .diffop import DiffOp, op_F, realize, realize_monomial
from .errors import DomainError
from .linalg import MatrixQ, nullspace, rank, solve, sparse_nullspace
from .parse import Grammar, join_terms, parse_with
from .poly import TXY, Poly, monomial_key, monomials_upto
from .weyl import WeylElem, hat_d

_t, _x, _y = Poly.var("t"), Poly.var("x"), Poly.var("y")


class ExpPoly:
    """Immutable ``sum exp(q) * p`` keyed by the exponent polynomial ``q``."""

    __slots__ = ("summands",)

    def __init__(self, summands: Iterable[tuple[Poly, Poly]] | Mapping | None = None):
        items = summands.items() if isinstance(summands, Mapping) else (summands or [])
        out: dict = {}
        for q, p in items:
            if not isinstance(q, Poly) or not isinstance(p, Poly):
                raise DomainError("exp-polynomial summands are (Poly, Poly) pairs")
            if q.ring != TXY or p.ring != TXY:
                raise DomainError("exp-polynomials live in the (t, x, y) ring")
            v = out[q] + p if q in out else p
            if v:
                out[q] = v
            else:
                out.pop(q, None)
        self.summands = out

    @classmethod
    def poly(cls, p) -> "ExpPoly":
        p = p if isinstance(p, Poly) else Poly.const(p)
        return cls([(Poly.zero(), p)])

    @classmethod
    def exp(cls, q: Poly, p: Poly | None = None) -> "ExpPoly":
        return cls([(q, p if p is not None else Poly.const(1))])

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    def is_zero(self) -> bool:
        return not self.summands

    def is_polynomial(self) -> bool:
        return all(q.is_zero() for q in self.summands)

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise DomainError("not a pure polynomial")
        return self.summands.get(Poly.zero(), Poly.zero())

    def sorted_summands(self) -> list:
        return sorted(self.summands.items(), key=lambda qp: _poly_order_key(qp[0]))

    def __add__(self, other):
        other = _coerce(other)
        return ExpPoly(list(self.summands.items()) + list(other.summands.items()))

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly([(q, -p) for q, p in self.summands.items()])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def scale(self, c) -> "ExpPoly":
        return ExpPoly([(q, p.scale(c)) for q, p in self.summands.items()])

    def __mul__(self, other):
        other = _coerce(other)
        return ExpPoly(
            [(q1 + q2, p1 * p2) for q1, p1 in self.summands.items() for q2, p2 in other.summands.items()]
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise DomainError("powers need a non-negative integer exponent")
        out = ExpPoly.poly(1)
        for _ in range(k):
            out = out * self
        return out

    def shift_exponents(self, c) -> "ExpPoly":
        """Replace each ``exp(q)`` by ``exp(q + c)``."""
        return ExpPoly([(q + c, p) for q, p in self.summands.items()])

    def subs(self, assignments: Mapping[str, Poly]) -> "ExpPoly":
        return ExpPoly([(q.subs(assignments), p.subs(assignments)) for q, p in self.summands.items()])

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self.summands == other.summands
        if isinstance(other, (int, Fraction, Poly)):
            return self == _coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.summands.items()))

    def to_text(self) -> str:
        if not self.summands:
            return "0"
        parts = []
        for q, p in self.sorted_summands():
            if q.is_zero():
                parts.append(p.to_text())
            else:
                parts.append(f"exp({q.to_text(sep='')})*({p.to_text(sep='')})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"ExpPoly({self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "summands": [
                {"exp_poly": q.to_json(), "prefactor": p.to_json()} for q, p in self.sorted_summands()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ExpPoly":
        return cls([(Poly.from_json(s["exp_poly"]), Poly.from_json(s["prefactor"])) for s in data["summands"]])


def _poly_order_key(q: Poly):
    # ascending graded-lex on the leading terms; the zero exponent comes first
    return tuple((monomial_key(m), c) for m, c in q.sorted_terms())


def _coerce(v) -> ExpPoly:
    if isinstance(v, ExpPoly):
        return v
    if isinstance(v, (int, Fraction, Poly)):
        return ExpPoly.poly(v)
    raise TypeError(f"cannot use {type(v).__name__} as an exp-polynomial")


def _exp_call(name: str, arg: ExpPoly) -> ExpPoly:
    if name != "exp":
        raise DomainError(f"unknown function {name!r}")
    if not arg.is_polynomial():
        raise DomainError("the exponent must be a polynomial")
    return ExpPoly.exp(arg.as_poly())


def _exp_name(ident: str) -> ExpPoly:
    if ident not in TXY:
        raise DomainError(f"unknown variable {ident!r}")
    return ExpPoly.poly(Poly.var(ident))


EXP_GRAMMAR = Grammar(number=ExpPoly.poly, name=_exp_name, power=lambda a, k: a ** k, call=_exp_call)


def parse_exppoly(text: str) -> ExpPoly:
    return parse_with(text, EXP_GRAMMAR)


# -- operators on exp-polynomials ------------------------------------------

def _apply_term(idx: tuple, q: Poly, p: Poly) -> Poly:
    # D^idx (e^q p) = e^q * prod_v (q_v + d_v)^idx_v p ; the factors commute
    out = p
    for var, k in zip(TXY, idx):
        if not k:
            continue
        qv = q.diff(var)
        for _ in range(k):
            out = qv * out + out.diff(var) if qv else out.diff(var)
    return out


def apply_op(A: DiffOp, u) -> ExpPoly:
    u = _coerce(u)
    out = []
    for q, p in u.summands.items():
        acc = Poly.zero()
        cache = {}
        for idx, f in A.terms.items():
            if idx not in cache:
                cache[idx] = _apply_term(idx, q, p)
            acc = acc + f * cache[idx]
        out.append((q, acc))
    return ExpPoly(out)


def residual(u) -> ExpPoly:
    return apply_op(op_F(), u)


@lru_cache(maxsize=None)
def _solution_poly(k: int, l: int) -> Poly:
    if k == 0 and l == 0:
        return Poly.const(1)
    if k == 0:
        return realize_monomial((0, 1, 0, 0)).apply_poly(_solution_poly(0, l - 1))
    return realize_monomial((1, 0, 0, 0)).apply_poly(_solution_poly(k - 1, l))


def solution_labels(n: int) -> list:
    """``(k, l)`` with ``k + l <= n``, ascending ``k + l`` then ``k``."""
    return [(k, s - k) for s in range(n + 1) for k in range(s + 1)]


def poly_solution_polys(n: int) -> list:
    if n < 0:
        raise DomainError("n must be non-negative")
    return [_solution_poly(k, l) for k, l in solution_labels(n)]


def poly_solution_basis(n: int) -> list:
    """``(P3)^k (P2)^l 1`` for ``k + l <= n``."""
    return [ExpPoly.poly(p) for p in poly_solution_polys(n)]


def particular_inhom(i: int, j: int, r: int) -> ExpPoly:
    """A solution of ``F u = t^r (P3)^i (P2)^j 1``."""
    if min(i, j, r) < 0:
        raise DomainError("indices must be non-negative")
    return ExpPoly.poly((_t ** (r + 1) * _solution_poly(i, j)).scale(Fraction(1, r + 1)))


def inhom_rhs(i: int, j: int, r: int) -> ExpPoly:
    return ExpPoly.poly(_t ** r * _solution_poly(i, j))


def polynomial_solution_space(D: int) -> list:
    """All polynomial solutions of total degree <= D, by direct elimination."""
    monos = monomials_upto(3, D)
    index = {m: i for i, m in enumerate(monos)}
    F = op_F()
    rows: dict = {}
    for j, m in enumerate(monos):
        img = F.apply_poly(Poly._raw({m: Fraction(1)}, TXY))
        for pm, c in img.terms.items():
            rows.setdefault(pm, {})[j] = c
    kernel = sparse_nullspace(list(rows.values()), len(monos))
    return [Poly({monos[j]: v for j, v in vec.items()}) for vec in kernel]


# -- coordinates and restricted operators ------------------------------------

def _coordinate_keys(elems: Sequence[ExpPoly]) -> list:
    keys = set()
    for e in elems:
        for q, p in e.summands.items():
            keys.update((q, m) for m in p.terms)
    return sorted(keys, key=lambda k: (_poly_order_key(k[0]), monomial_key(k[1])))


def _vector(e: ExpPoly, index: dict) -> list | None:
    v = [Fraction(0)] * len(index)
    for q, p in e.summands.items():
        for m, c in p.terms.items():
            i = index.get((q, m))
            if i is None:
                return None
            v[i] = c
    return v


def coordinates(elems: Sequence[ExpPoly], basis: Sequence[ExpPoly]) -> list:
    """Coordinates of each element in ``basis``; None where outside the span."""
    keys = _coordinate_keys(basis)
    index = {k: i for i, k in enumerate(keys)}
    T = MatrixQ.from_rows([_vector(b, index) for b in basis], len(keys)).transpose() if basis else None
    out = []
    for e in elems:
        if e.is_zero():
            out.append([Fraction(0)] * len(basis))
            continue
        v = _vector(e, index) if basis else None
        out.append(None if v is None else solve(T, v))
    return out


def span_rank(elems: Sequence[ExpPoly]) -> int:
    elems = [e for e in elems if not e.is_zero()]
    if not elems:
        return 0
    keys = _coordinate_keys(elems)
    index = {k: i for i, k in enumerate(keys)}
    return rank(MatrixQ.from_rows([_vector(e, index) for e in elems], len(keys)))


@dataclass(frozen=True)
class RestrictedOp:
    """Matrix of an operator between two finite families of exp-polynomials.

    Column ``j`` holds the coordinates of the image of ``src[j]`` in ``tgt``.
    """

    src: tuple
    tgt: tuple
    matrix: MatrixQ

    def is_endomorphism(self) -> bool:
        return self.src == self.tgt

    def vector_to_element(self, v: Sequence) -> ExpPoly:
        out = ExpPoly.zero()
        for c, e in zip(v, self.tgt):
            if c:
                out = out + e.scale(c)
        return out


def restricted_matrix(A: DiffOp, src: Sequence[ExpPoly], tgt: Sequence[ExpPoly]) -> RestrictedOp:
    if span_rank(tgt) != len(tgt):
        raise DomainError("target family is linearly dependent")
    images = [apply_op(A, s) for s in src]
    coords = coordinates(images, tgt)
    for j, c in enumerate(coords):
        if c is None:
            raise DomainError(f"image of source element {j} ({src[j]}) leaves the target span")
    rows = [[coords[j][i] for j in range(len(src))] for i in range(len(tgt))]
    return RestrictedOp(tuple(src), tuple(tgt), MatrixQ.from_rows(rows, len(src)) if tgt else MatrixQ.zeros(0, len(src)))


# -- kernel decompositions ----------------------------------------------------

_PAIRS = {("P0", "P3"): Fraction(-3), ("P1", "P2"): Fraction(1)}
_GEN_MONO = {"P3": (1, 0, 0, 0), "P2": (0, 1, 0, 0), "P1": (0, 0, 1, 0), "P0": (0, 0, 0, 1)}


def _matrix_vectors(M: MatrixQ, vecs: list) -> list:
    return [M @ v for v in vecs]


def _span_dim(vecs: list, ncols: int) -> int:
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return 0
    return rank(MatrixQ.from_rows(vecs, ncols))


def kernel_power_check(A_name: str, B_name: str, r: int, N: int) -> dict:
    """Check ``ker A^r = sum_{i<r} B^i ker A`` on polynomial solutions.

    The space is ``V_N``, spanned by ``(P3)^k (P2)^l 1`` with ``k + l <= N``;
    both ``P3`` and ``P2`` raise ``k + l`` by one, so ``B^i`` maps
    ``V_{N-i}`` into ``V_N``.  Reported separately: containment of
    ``B^i (ker A on V_{N-i})`` in ``ker A^(i+1)``, directness of the sum, and
    equality of dimensions with ``ker A^r`` on ``V_N``.
    """
    if (A_name, B_name) not in _PAIRS:
        raise DomainError(f"unsupported pair ({A_name}, {B_name}); use (P0, P3) or (P1, P2)")
    if r < 1 or N < 0:
        raise DomainError("need r >= 1 and N >= 0")
    shift = 1
    A = realize_monomial(_GEN_MONO[A_name])
    B = realize_monomial(_GEN_MONO[B_name])
    V = poly_solution_basis(N)
    dimV = len(V)
    RA = restricted_matrix(A, V, V).matrix
    RB_src = {}
    kernels_A = {}
    for i in range(r):
        M = N - shift * i
        if M < 0:
            kernels_A[i] = []
            continue
        sub = poly_solution_basis(M)
        kernels_A[i] = nullspace(restricted_matrix(A, sub, sub).matrix)
        RB_src[i] = restricted_matrix(B ** i if i else DiffOp.identity(), sub, V).matrix

    contained = True
    pieces = []
    piece_dims = []
    for i in range(r):
        if not kernels_A[i]:
            piece_dims.append(0)
            continue
        imgs = _matrix_vectors(RB_src[i], kernels_A[i])
        Ap = RA.power(i + 1)
        if any(any(Ap @ v) for v in imgs):
            contained = False
        piece_dims.append(_span_dim(imgs, dimV))
        pieces.extend(imgs)
    injective = all(d == len(kernels_A[i]) for i, d in enumerate(piece_dims))
    sum_dim = _span_dim(pieces, dimV)
    direct = sum_dim == sum(piece_dims)
    ker_r = nullspace(RA.power(r))
    dims_match = len(ker_r) == sum_dim == sum(len(kernels_A[i]) for i in range(r))
    return {
        "pair": (A_name, B_name),
        "r": r,
        "N": N,
        "shift": shift,
        "space_dimension": dimV,
        "ker_A_dims": [len(kernels_A[i]) for i in range(r)],
        "ker_Ar_dim": len(ker_r),
        "sum_dim": sum_dim,
        "containment": contained,
        "injective": injective,
        "direct": direct,
        "dimensions_match": dims_match,
        "pass": contained and injective and direct and dims_match,
    }


def _poly_of_matrix(M: MatrixQ, roots: Sequence[tuple]) -> MatrixQ:
    n = M.rows
    out = MatrixQ.identity(n)
    I = MatrixQ.identity(n)
    for lam, k in roots:
        out = out @ (M - I.scale(lam)).power(k)
    return out


def polynomial_factor_kernel_check(A: RestrictedOp, roots: Sequence[tuple]) -> dict:
    """Check ``ker P(A) = (+)_i ker (A - lam_i)^k_i`` for ``P = prod (x - lam_i)^k_i``."""
    if not A.is_endomorphism():
        raise DomainError("polynomial factor check needs an endomorphism (src == tgt)")
    roots = [(Fraction(l), int(k)) for l, k in roots]
    if len({l for l, _ in roots}) != len(roots) or any(k < 1 for _, k in roots):
        raise DomainError("roots must be distinct with positive multiplicities")
    M = A.matrix
    n = M.rows
    I = MatrixQ.identity(n)
    total = nullspace(_poly_of_matrix(M, roots))
    PM = _poly_of_matrix(M, roots)
    pieces = []
    dims = []
    contained = True
    for lam, k in roots:
        ker = nullspace((M - I.scale(lam)).power(k))
        dims.append(len(ker))
        pieces.extend(ker)
        if any(any(PM @ v) for v in ker):
            contained = False
    sum_dim = _span_dim(pieces, n)
    direct = sum_dim == sum(dims)
    equal = sum_dim == len(total)
    return {
        "roots": [(str(l), k) for l, k in roots],
        "kernel_dims": dims,
        "ker_P_dim": len(total),
        "sum_dim": sum_dim,
        "containment": contained,
        "direct": direct,
        "dimensions_match": equal,
        "pass": contained and direct and equal,
    }


def hat_d_restricted(N: int) -> RestrictedOp:
    V = poly_solution_basis(N)
    return restricted_matrix(realize(hat_d()), V, V)


# -- group action on the gamma = 0 stratum -------------------------------------

@dataclass(frozen=True)
class GroupParams:
    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(0)
    l0: Fraction = Fraction(0)
    l1: Fraction = Fraction(0)
    l2: Fraction = Fraction(0)
    l3: Fraction = Fraction(0)
    sigma: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "beta", "l0", "l1", "l2", "l3", "sigma"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.alpha == 0:
            raise DomainError("alpha must be nonzero")
        if self.sigma == 0:
            raise DomainError("sigma must be nonzero")

    def exponent(self) -> Poly:
        l2, l3 = self.l2, self.l3
        return (
            _x.scale(l2)
            - (_y - _t * _x).scale(3 * l3)
            + (_t ** 3).scale(3 * l3 * l3)
            + (_t ** 2).scale(3 * l3 * l2)
            + _t.scale(l2 * l2)
        )

    def point_map(self) -> dict:
        """Images of (t, x, y) under the substitution (gamma = 0, delta = 1/alpha)."""
        a = self.alpha
        xh = _x + (_t ** 2).scale(3 * self.l3) + _t.scale(2 * self.l2) + self.l1
        yh = _y + (_t ** 3).scale(self.l3) + (_t ** 2).scale(self.l2) + _t.scale(self.l1) + self.l0
        return {
            "t": _t.scale(a * a) + a * self.beta,
            "x": xh.scale(a),
            "y": yh.scale(a ** 3),
        }

    def prefactor(self) -> Fraction:
        return self.alpha ** 2 / self.sigma

    def as_dict(self) -> dict:
        return {k: str(getattr(self, k)) for k in ("alpha", "beta", "l0", "l1", "l2", "l3", "sigma")}


def group_act(g: GroupParams, h) -> ExpPoly:
    """New solution ``sigma^-1 alpha^2 e^E h(alpha^2 t + alpha beta, alpha x^, alpha^3 y^)``."""
    h = _coerce(h)
    moved = h.subs(g.point_map())
    return (moved * ExpPoly.exp(g.exponent())).scale(g.prefactor())


def compose_params(g2: GroupParams, g1: GroupParams) -> tuple[GroupParams, Fraction]:
    """Parameters ``g3`` and a constant ``c`` with ``T_g2 T_g1 = e^c T_g3``."""
    phi1, phi2 = g1.point_map(), g2.point_map()
    phi = {v: phi1[v].subs(phi2) for v in TXY}
    a3 = g1.alpha * g2.alpha
    tc = phi["t"]
    if tc.coeff((1, 0, 0)) != a3 * a3 or len(tc.terms) > 2:
        raise DomainError("composition left the gamma = 0 stratum")
    beta3 = tc.constant_term() / a3
    xh = phi["x"].scale(1 / a3)
    yh = phi["y"].scale(1 / a3 ** 3)
    l3 = xh.coeff((2, 0, 0)) / 3
    l2 = xh.coeff((1, 0, 0)) / 2
    l1 = xh.constant_term()
    l0 = yh.constant_term()
    g3 = GroupParams(a3, beta3, l0, l1, l2, l3, g1.sigma * g2.sigma)
    if g3.point_map() != phi:
        raise DomainError("composed substitution is not of the expected form")
    diff = g2.exponent() + g1.exponent().subs(phi2) - g3.exponent()
    if not diff.is_constant():
        raise DomainError("composed exponents differ by a non-constant")
    if g3.prefactor() != g1.prefactor() * g2.prefactor():
        raise DomainError("prefactors do not compose")
    return g3, diff.constant_term()


# -- determining equations ---------------------------------------------------

def _eta_labels(n: int) -> list:
    return [(k, s - k) for s in range(n + 1) for k in range(s, -1, -1)]


def solve_determining(n: int, degree_cap: int | None = None, budget_seconds: float | None = None) -> dict:
    """Polynomial solutions of the determining system for order-n characteristics.

    Unknowns are the coefficients of ``eta^{kl}(t, x, y)``, ``k + l <= n``,
    of total degree <= ``degree_cap`` (default ``4 n``).  Equations::

        F eta^{kl} - (k+1) eta^{k+1,l-1} - 2 d_x eta^{k-1,l} = 0,   k + l <= n + 1

    with ``eta`` taken as zero outside ``k + l <= n``.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    if degree_cap is None:
        degree_cap = 4 * n
    if degree_cap < 0:
        raise DomainError("degree cap must be non-negative")
    start = time.monotonic()
    labels = _eta_labels(n)
    monos = monomials_upto(3, degree_cap)
    cols = [(kl, m) for kl in labels for m in monos]
    F = op_F()
    rows: dict = {}

    def add(row_key, j, c):
        r = rows.setdefault(row_key, {})
        v = r.get(j, 0) + c
        if v:
            r[j] = v
        else:
            r.pop(j, None)

    for j, ((k, l), m) in enumerate(cols):
        mono = Poly._raw({m: Fraction(1)}, TXY)
        for pm, c in F.apply_poly(mono).terms.items():
            add((k, l, pm), j, c)
        # appears as eta^{k'+1, l'-1} in Delta_{k', l'} with k' = k - 1, l' = l + 1
        if k >= 1:
            add((k - 1, l + 1, m), j, -k)
        # appears as eta^{k'-1, l'}_x in Delta_{k', l'} with k' = k + 1
        for pm, c in mono.diff("x").terms.items():
            add((k + 1, l, pm), j, -2 * c)
    kernel = sparse_nullspace([r for r in rows.values() if r], len(cols))
    basis = []
    for vec in kernel:
        eta: dict = {}
        for j, c in vec.items():
            kl, m = cols[j]
            eta.setdefault(kl, {})[m] = c
        basis.append({kl: Poly(t) for kl, t in sorted(eta.items())})
    elapsed = time.monotonic() - start
    return {
        "n": n,
        "degree_cap": degree_cap,
        "unknowns": len(cols),
        "equations": len(rows),
        "dimension": len(kernel),
        "basis": basis,
        "complete": budget_seconds is None or elapsed <= budget_seconds,
    }


def characteristic_of(op: DiffOp) -> dict:
    """``{(k, l): eta^{kl}}`` for an operator without ``Dt``."""
    if op.has_dt():
        raise DomainError("operator contains Dt; reduce it modulo F first")
    return {(b, c): f for (a, b, c), f in op.terms.items()}


def satisfies_determining(eta: Mapping[tuple, Poly], n: int) -> bool:
    F = op_F()
    zero = Poly.zero()
    for s in range(n + 2):
        for k in range(s + 1):
            l = s - k
            lhs = F.apply_poly(eta.get((k, l), zero))
            lhs = lhs - eta.get((k + 1, l - 1), zero).scale(k + 1) if l >= 1 else lhs
            lhs = lhs - eta.get((k - 1, l), zero).diff("x").scale(2) if k >= 1 else lhs
            if lhs:
                return False
    return True
