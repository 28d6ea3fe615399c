from itertools import product

import pytest
from hypothesis import given, settings

from conftest import weyl_elems
from kolmogorov_weyl.errors import DomainError
from kolmogorov_weyl.genweyl import (
    GenWeylElem,
    commutator_formula,
    from_w2,
    gen_weyl_commutator,
    gen_weyl_mul,
    to_w2,
)
from kolmogorov_weyl.weyl import ONE, P1, P2, P3, casimir


def q(n, i):
    return GenWeylElem.q(n, i)


def p(n, i):
    return GenWeylElem.p(n, i)


def test_rank_one_examples():
    assert gen_weyl_commutator(p(1, 0), q(1, 0)) == GenWeylElem.const(1)
    assert gen_weyl_commutator(q(1, 0) * p(1, 0), q(1, 0)) == q(1, 0)


def test_independent_pairs_commute():
    assert gen_weyl_commutator(p(2, 0), q(2, 1)).is_zero()


def test_rank_mismatch():
    with pytest.raises(DomainError):
        gen_weyl_mul(q(1, 0), q(2, 0))


def test_generator_images():
    assert to_w2(P3) == p(2, 0).scale(3)
    assert to_w2(P1 * P2) == q(2, 1) * p(2, 1) + GenWeylElem.const(2)
    assert to_w2(ONE) == GenWeylElem.const(2)
    assert from_w2(to_w2(casimir())) == casimir()


@pytest.mark.parametrize("n", [1, 2])
def test_commutator_formula_all_small_indices(n):
    idx = list(product(range(4), repeat=n))
    for k, l, k2, l2 in product(idx, repeat=4):
        a = GenWeylElem(n, {(k, l): 1})
        b = GenWeylElem(n, {(k2, l2): 1})
        assert gen_weyl_commutator(a, b) == commutator_formula(k, l, k2, l2)


@settings(max_examples=500)
@given(weyl_elems(4, 3), weyl_elems(4, 3))
def test_isomorphism(a, b):
    assert to_w2(a * b) == to_w2(a) * to_w2(b)
    assert from_w2(to_w2(a)) == a
