from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import weyl_elems
from kolmogorov_weyl import solutions as S
from kolmogorov_weyl.diffop import DiffOp, realize
from kolmogorov_weyl.errors import DomainError, ParseError
from kolmogorov_weyl.linalg import MatrixQ
from kolmogorov_weyl.poly import Poly
from kolmogorov_weyl.weyl import P0, P1, P2, P3

t, x, y = Poly.var("t"), Poly.var("x"), Poly.var("y")
E = S.ExpPoly


def test_apply_examples():
    assert S.apply_op(realize(P2), E.poly(1)) == E.poly(x)
    assert S.apply_op(realize(P3), E.poly(1)) == E.poly(3 * t * x - 3 * y)
    v = S.apply_op(realize(P3), E.poly(x))
    assert v == E.poly(3 * t ** 2 + 3 * t * x ** 2 - 3 * x * y)
    assert S.residual(v).is_zero()


def test_residual_examples():
    assert S.residual(E.poly(x ** 2 + 2 * t)).is_zero()
    assert S.residual(E.exp(x + t)).is_zero()
    assert S.residual(E.poly(y)) == E.poly(x)


def test_exp_derivative_rule():
    u = E.exp(x * y, t)
    got = S.apply_op(DiffOp.d(0, 1, 1), u)
    # d_y d_x (e^{xy} t) = e^{xy} t (1 + xy)
    assert got == E.exp(x * y, t + t * x * y)


def test_basis_examples():
    assert S.poly_solution_basis(0) == [E.poly(1)]
    assert S.poly_solution_basis(1) == [E.poly(1), E.poly(x), E.poly(3 * t * x - 3 * y)]
    assert len(S.poly_solution_basis(2)) == 6


@pytest.mark.parametrize("n", range(9))
def test_basis_properties(n):
    basis = S.poly_solution_basis(n)
    assert len(basis) == (n + 1) * (n + 2) // 2
    assert all(S.residual(u).is_zero() for u in basis)
    assert S.span_rank(basis) == len(basis)


@pytest.mark.parametrize("D", range(9))
def test_brute_force_solution_space(D):
    space = S.polynomial_solution_space(D)
    labels = S.solution_labels(D)
    basis = [p for (k, l), p in zip(labels, S.poly_solution_polys(D)) if 2 * k + l <= D]
    assert all(p.degree() <= D for p in basis)
    assert len(space) == len(basis)
    assert S.span_rank([E.poly(p) for p in space + basis]) == len(basis)


def test_particular_examples():
    assert S.particular_inhom(0, 0, 0) == E.poly(t)
    assert S.residual(S.particular_inhom(0, 0, 0)) == E.poly(1)
    assert S.particular_inhom(0, 1, 1) == E.poly((t ** 2 * x).scale(Fraction(1, 2)))
    assert S.residual(S.particular_inhom(0, 1, 1)) == E.poly(t * x)
    assert S.particular_inhom(0, 0, 2) == E.poly((t ** 3).scale(Fraction(1, 3)))


@pytest.mark.parametrize("i", range(4))
@pytest.mark.parametrize("j", range(4))
@pytest.mark.parametrize("r", range(4))
def test_particular_residuals(i, j, r):
    assert S.residual(S.particular_inhom(i, j, r)) == S.inhom_rhs(i, j, r)


@settings(max_examples=100)
@given(weyl_elems(4, 3), st.integers(0, 14))
def test_recursion_operator_property(a, idx):
    u = S.poly_solution_basis(4)[idx]
    assert S.residual(S.apply_op(realize(a), u)).is_zero()


def test_restricted_examples():
    basis = S.poly_solution_basis(1)
    R = S.restricted_matrix(realize(P1), basis, basis)
    assert R.matrix == MatrixQ.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    I = S.restricted_matrix(DiffOp.identity(), basis, basis)
    assert I.matrix == MatrixQ.identity(3)
    V = S.poly_solution_basis(2)
    R0 = S.restricted_matrix(realize(P0), V, V)
    # P0 (P3 1) = -3, P0 (P3 P2 1) = -3 x
    assert R0.matrix[0, 2] == -3 and R0.matrix[1, 4] == -3


def test_restricted_image_outside_span():
    basis = S.poly_solution_basis(1)
    with pytest.raises(DomainError, match="source element 1"):
        S.restricted_matrix(realize(P2), basis, basis)


@pytest.mark.parametrize("pair", [("P0", "P3"), ("P1", "P2")])
@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("N", range(7))
def test_kernel_power_check(pair, r, N):
    rep = S.kernel_power_check(pair[0], pair[1], r, N)
    assert rep["containment"] and rep["direct"] and rep["dimensions_match"], rep


def test_kernel_of_p0_is_heat_polynomials():
    V = S.poly_solution_basis(4)
    R = S.restricted_matrix(realize(P0), V, V)
    from kolmogorov_weyl.linalg import nullspace

    for v in nullspace(R.matrix):
        u = R.vector_to_element(v).as_poly()
        assert u.diff("y").is_zero()


def test_kernel_power_invalid_pair():
    with pytest.raises(DomainError):
        S.kernel_power_check("P0", "P2", 1, 2)


def test_polynomial_factor_examples():
    A = S.restricted_matrix(realize(P0), S.poly_solution_basis(3), S.poly_solution_basis(3))
    assert S.polynomial_factor_kernel_check(A, [(0, 1)])["pass"]
    sq = S.polynomial_factor_kernel_check(A, [(0, 2)])
    kp = S.kernel_power_check("P0", "P3", 2, 3)
    assert sq["ker_P_dim"] == kp["ker_Ar_dim"]
    D = S.hat_d_restricted(3)
    rep = S.polynomial_factor_kernel_check(D, [(2, 1), (3, 1)])
    assert rep["pass"] and rep["kernel_dims"] == [1, 1]
    rep = S.polynomial_factor_kernel_check(D, [(2, 1), (3, 2), (5, 1), (6, 3)])
    assert rep["pass"]


def test_polynomial_factor_on_nondiagonalizable():
    # a Jordan block plus an eigenvalue 1 block
    M = MatrixQ.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 1]])
    src = tuple(E.poly(v) for v in (Poly.const(1), x, t))
    A = S.RestrictedOp(src, src, M)
    assert S.polynomial_factor_kernel_check(A, [(0, 2), (1, 1)])["pass"]
    assert S.polynomial_factor_kernel_check(A, [(0, 1), (1, 1)])["ker_P_dim"] == 2


def test_group_identity_and_examples():
    h = E.poly(3 * t * x - 3 * y) + E.exp(x + t)
    assert S.group_act(S.GroupParams(), h) == h
    c = Fraction(2, 3)
    assert S.group_act(S.GroupParams(l2=c), 1) == E.exp(x.scale(c) + t.scale(c * c))
    g = S.GroupParams(l3=c)
    u = S.group_act(g, 1)
    assert u == E.exp((y - t * x).scale(-3 * c) + (t ** 3).scale(3 * c * c))
    assert S.residual(u).is_zero()


def test_group_params_validated():
    with pytest.raises(DomainError):
        S.GroupParams(alpha=0)
    with pytest.raises(DomainError):
        S.GroupParams(sigma=0)


rationals = st.fractions(min_value=-2, max_value=2, max_denominator=3)
nonzero = rationals.filter(lambda v: v != 0)
params = st.builds(S.GroupParams, nonzero, rationals, rationals, rationals, rationals, rationals, nonzero)


@st.composite
def seed_solutions(draw):
    basis = S.poly_solution_basis(2)
    coeffs = draw(st.lists(rationals, min_size=len(basis), max_size=len(basis)))
    u = E.zero()
    for c, b in zip(coeffs, basis):
        u = u + b.scale(c)
    lam = draw(rationals)
    return u + E.exp(x.scale(lam) + t.scale(lam * lam))


@settings(max_examples=100)
@given(params, params, seed_solutions())
def test_group_action_law(g1, g2, h):
    u1 = S.group_act(g1, h)
    assert S.residual(u1).is_zero()
    g3, c = S.compose_params(g2, g1)
    assert S.group_act(g2, u1) == S.group_act(g3, h).shift_exponents(c)


@pytest.mark.parametrize("n,dim", [(0, 1), (1, 5), (2, 15)])
def test_determining_small(n, dim):
    r = S.solve_determining(n)
    assert r["dimension"] == dim
    assert S.solve_determining(n, r["degree_cap"] + 1)["dimension"] == dim
    for eta in r["basis"]:
        assert S.satisfies_determining(eta, n)


def test_determining_contains_realized_operators():
    from kolmogorov_weyl.weyl import basis_ord

    for n in range(3):
        for a in basis_ord(n):
            assert S.satisfies_determining(S.characteristic_of(realize(a)), n)


@given(seed_solutions())
def test_exppoly_text_and_json_round_trip(u):
    assert S.parse_exppoly(str(u)) == u
    assert E.from_json(u.to_json()) == u


def test_exppoly_parse_rules():
    assert S.parse_exppoly("exp(0)*(x)") == E.poly(x)
    assert S.parse_exppoly("exp(x)*exp(t)") == E.exp(x + t)
    with pytest.raises(ParseError):
        S.parse_exppoly("exp(exp(x))")
    with pytest.raises(ParseError):
        S.parse_exppoly("log(x)")


def test_exppoly_print_order():
    u = E.exp(x) + E.poly(y) + E.exp(t)
    assert str(u) == "y + exp(x)*(1) + exp(t)*(1)"
    assert str(E.exp(t) + E.exp(x)) == str(u - E.poly(y))
