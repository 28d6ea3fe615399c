from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kolmogorov_weyl import _elim_py, linalg
from kolmogorov_weyl.errors import DomainError
from kolmogorov_weyl.linalg import MatrixQ, nullspace, rank, solve, sparse_nullspace
from kolmogorov_weyl.poly import Poly, monomials_upto

try:
    from kolmogorov_weyl import _elim
except ImportError:
    _elim = None


def test_identity_has_trivial_kernel():
    assert nullspace(MatrixQ.identity(3)) == []
    assert rank(MatrixQ.identity(5)) == 5


def test_zero_matrix_kernel():
    assert len(nullspace(MatrixQ.zeros(2, 3))) == 3


def test_rank_one_kernel():
    (v,) = nullspace(MatrixQ.from_rows([[1, 1], [2, 2]]))
    assert v[0] == -v[1] != 0


def test_rank_of_solution_polys():
    t, x, y = (Poly.var(v) for v in "txy")
    monos = monomials_upto(3, 2)
    rows = [[p.coeff(m) for m in monos] for p in (Poly.const(1), x, 3 * t * x - 3 * y)]
    assert rank(MatrixQ.from_rows(rows)) == 3


def test_solve_examples():
    assert solve(MatrixQ.from_rows([[2]]), [3]) == [Fraction(3, 2)]
    assert solve(MatrixQ.from_rows([[1, 1], [1, 1]]), [1, 2]) is None
    with pytest.raises(DomainError):
        solve(MatrixQ.from_rows([[1, 2]]), [1, 2])


def test_entries_length_checked():
    with pytest.raises(DomainError):
        MatrixQ(2, 2, (Fraction(1),))


matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(
        st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=c, max_size=c),
        min_size=1,
        max_size=6,
    )
)


@given(matrices)
def test_rank_nullity(rows):
    M = MatrixQ.from_rows(rows)
    ker = nullspace(M)
    assert rank(M) + len(ker) == M.cols
    for v in ker:
        assert all(c == 0 for c in M @ v)


@given(matrices)
def test_sparse_matches_dense(rows):
    M = MatrixQ.from_rows(rows)
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    assert len(sparse_nullspace(sparse, M.cols)) == len(nullspace(M))
    assert linalg.sparse_rank(sparse, M.cols) == rank(M)


int_matrices = st.integers(1, 7).flatmap(
    lambda c: st.tuples(
        st.lists(
            st.lists(st.one_of(st.integers(-5, 5), st.integers(-(10 ** 20), 10 ** 20)), min_size=c, max_size=c),
            min_size=1,
            max_size=7,
        ),
        st.just(c),
    )
)


@pytest.mark.skipif(_elim is None, reason="compiled kernel not built")
@given(int_matrices)
def test_backends_agree(case):
    rows, ncols = case
    assert _elim.rref_int(rows, ncols) == _elim_py.rref_int(rows, ncols)


def test_backend_name():
    assert linalg.BACKEND in ("cython", "python")


def test_fallback_selected_when_extension_missing():
    import subprocess
    import sys

    code = (
        "import sys; sys.modules['kolmogorov_weyl._elim'] = None\n"
        "from kolmogorov_weyl import linalg, solutions\n"
        "print(linalg.BACKEND, solutions.solve_determining(1)['dimension'])\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "5"]
