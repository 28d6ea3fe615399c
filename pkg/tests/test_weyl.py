from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import homogeneous_weyl, weyl_elems
from kolmogorov_weyl import weyl
from kolmogorov_weyl.errors import DomainError, ParseError
from kolmogorov_weyl.poly import NEG_INF
from kolmogorov_weyl.weyl import (
    ONE,
    P0,
    P1,
    P2,
    P3,
    WeylElem,
    casimir,
    hat_d,
    hat_k,
    hat_pt,
    pair_reorder,
    parse_weyl,
    weyl_commutator,
)

CASIMIR_TEXT = "P3^2*P0^2 - 6*P3*P2*P1*P0 + 4*P3*P1^3 + 4*P2^3*P0 - 3*P2^2*P1^2 - 9*P3*P0 + 3*P2*P1"


def test_pair_reorder_single_swap():
    assert pair_reorder(1, 1, Fraction(3)) == {(1, 1): 1, (0, 0): -3}


def test_pair_reorder_double():
    assert pair_reorder(2, 2, Fraction(3)) == {(2, 2): 1, (1, 1): -12, (0, 0): 18}


def test_pair_reorder_commuting():
    assert pair_reorder(3, 2, Fraction(0)) == {(2, 3): 1}


def test_products_from_presentation():
    assert P0 * P3 == P3 * P0 - 3
    assert P1 * P2 == P2 * P1 + 1
    assert P0 ** 2 * P3 ** 2 == P3 ** 2 * P0 ** 2 - 12 * P3 * P0 + 18


def test_presentation_commutators():
    assert weyl_commutator(P3, P0) == 3
    assert weyl_commutator(P1, P2) == 1
    for a, b in ((P3, P2), (P3, P1), (P2, P0), (P1, P0)):
        assert weyl_commutator(a, b).is_zero()


def test_sl2_brackets():
    assert weyl_commutator(hat_pt(), hat_k()) == hat_d()
    assert weyl_commutator(hat_pt(), hat_d()) == 2 * hat_pt()
    assert weyl_commutator(hat_d(), hat_k()) == 2 * hat_k()


def test_casimir_normal_form():
    c = casimir()
    assert str(c) == CASIMIR_TEXT
    expected = (
        P3 ** 2 * P0 ** 2 - 6 * P3 * P2 * P1 * P0 - 3 * P2 ** 2 * P1 ** 2 + 4 * P2 ** 3 * P0
        + 4 * P3 * P1 ** 3 + 3 * P2 * P1 - 9 * P3 * P0
    )
    assert c == expected
    assert c.degree() == 4
    for h in (hat_pt(), hat_d(), hat_k()):
        assert weyl_commutator(c, h).is_zero()


def test_zero_degree():
    assert WeylElem.zero().degree() == NEG_INF


@pytest.mark.parametrize("n,size", [(0, 1), (1, 5), (2, 15), (3, 36), (4, 74)])
def test_basis_ord_sizes(n, size):
    assert len(weyl.basis_ord(n)) == size


def test_basis_ord_n3_contains_casimir():
    assert weyl.basis_ord(3)[-1] == casimir()


def test_dimension_spot_values():
    assert weyl.dim_ord_closed(1) == 5
    assert weyl.dim_layer_closed(0) == 1
    assert weyl.dim_layer_closed(4) == 38


@pytest.mark.parametrize("n", range(13))
def test_dimension_formulas_agree(n):
    assert len(weyl.basis_ord_labels(n)) == weyl.dim_ord_closed(n) == weyl.dim_ord_sum(n)
    assert weyl.dim_layer_closed(n) == weyl.dim_ord_closed(n) - weyl.dim_ord_closed(n - 1)


@pytest.mark.parametrize("n", range(9))
def test_basis_ord_independent(n):
    assert weyl.elements_rank(weyl.basis_ord(n)) == weyl.dim_ord_closed(n)


def test_every_generator_order_gives_a_basis():
    ranks = weyl.reordering_ranks(4)
    assert len(ranks) == 24
    assert set(ranks.values()) == {70}


def test_grading_examples():
    assert set(weyl.grading_decompose(P3)) == {1}
    assert set(weyl.grading_decompose(hat_d())) == {0}
    assert set(weyl.grading_decompose(casimir())) == {-2, 0, 2}
    assert weyl_commutator(weyl.s_grading(), P3) == -P3


def test_grading_eigenvalues():
    s = weyl.s_grading()
    for m in weyl.monomials_deg(4):
        assert weyl.ad_eigenvalue(s, m) == -weyl.weight(m)


def test_listed_grading_element_has_wrong_sign_on_p2():
    listed = (P3 * P0).scale(Fraction(1, 3)) + P2 * P1
    assert weyl.ad_eigenvalue(listed, (0, 1, 0, 0)) == 1


@given(st.integers(-3, 3), st.integers(-3, 3), st.data())
def test_weights_add(w1, w2, data):
    a = data.draw(homogeneous_weyl(w1, 3))
    b = data.draw(homogeneous_weyl(w2, 3))
    assert (a * b).weights() <= {w1 + w2}


@settings(max_examples=500)
@given(weyl_elems(4, 3), weyl_elems(4, 3), weyl_elems(4, 3))
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(weyl_elems(4), weyl_elems(4))
def test_degree_bound(a, b):
    if a and b:
        assert (a * b).degree() <= a.degree() + b.degree()


@given(weyl_elems(4))
def test_text_round_trip(a):
    assert parse_weyl(str(a)) == a
    assert parse_weyl(str(parse_weyl(str(a)))) == parse_weyl(str(a))


@given(weyl_elems(4))
def test_json_round_trip(a):
    assert WeylElem.from_json(a.to_json()) == a


def test_parse_examples():
    assert parse_weyl("P1*P2") == P2 * P1 + 1
    assert parse_weyl("C") == casimir()
    assert parse_weyl("(P0)^0") == ONE
    assert parse_weyl("2/3*P3 - P0^2") == P3.scale(Fraction(2, 3)) - P0 ** 2


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_weyl("P1 *")
    with pytest.raises(ParseError):
        parse_weyl("Q7")
    with pytest.raises(ParseError):
        parse_weyl("P1^x")


def test_centralizer_examples():
    assert weyl.centralizer_check(weyl.h1_s11(), hat_pt() + P3)
    assert not weyl.centralizer_check(P0, P3)


def test_listed_centralizers_other_than_s():
    for label, b, items in weyl.centralizer_cases():
        for name, e in items:
            if name == "S":
                continue
            assert weyl.centralizer_check(e, b), (label, name)


def test_listed_s_element_and_its_one_coefficient_fix():
    b = hat_pt() + hat_k()
    assert not weyl.centralizer_check(weyl.s_s14(), b)
    assert weyl.centralizer_check(weyl.s_s14_corrected(), b)
    fixed = weyl.s_s14_corrected() - weyl.s_s14()
    assert fixed == -2 * P3 * P1 ** 2 * P0


def test_center_is_trivial_up_to_degree_6():
    assert weyl.central_dimension(6) == 1


def test_lie_closure_small_cases():
    assert weyl.lie_closure([P0], 3, 3)["dimension"] == 1
    r = weyl.lie_closure([P1, P2], 3, 5)
    assert r["dimension"] == 3
    assert r["low_degree_dimension"] == 3
    assert r["converged"]


def test_lie_closure_caps_validated():
    with pytest.raises(DomainError):
        weyl.lie_closure([P0], 0, 3)


def test_lie_closure_is_deterministic():
    a = weyl.lie_closure(weyl.sample_generators(), 8, 3)
    b = weyl.lie_closure(weyl.sample_generators(), 8, 3)
    assert a["basis"] == b["basis"]
