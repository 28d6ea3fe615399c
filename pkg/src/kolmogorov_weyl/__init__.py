"""Exact algebra of linear generalized symmetries of u_t + x u_y = u_xx."""

from .errors import DomainError, ParseError
from .linalg import BACKEND, MatrixQ, nullspace, rank, solve
from .poly import Poly, parse_poly
from .weyl import (
    P0,
    P1,
    P2,
    P3,
    WeylElem,
    basis_ord,
    casimir,
    centralizer_check,
    dim_layer_closed,
    dim_ord_closed,
    dim_ord_sum,
    grading_decompose,
    lie_closure,
    pair_reorder,
    parse_weyl,
    weyl_commutator,
    weyl_mul,
    weyl_power,
)
from .genweyl import GenWeylElem, from_w2, gen_weyl_commutator, gen_weyl_mul, to_w2
from .diffop import (
    DiffOp,
    commutes_with_F,
    compose,
    op_F,
    parse_diffop,
    realize,
    reduce_mod_F,
    structure_constants_check,
)
from .solutions import (
    ExpPoly,
    GroupParams,
    RestrictedOp,
    apply_op,
    group_act,
    kernel_power_check,
    parse_exppoly,
    particular_inhom,
    poly_solution_basis,
    polynomial_factor_kernel_check,
    residual,
    restricted_matrix,
    solve_determining,
)

__version__ = "0.1.0"
