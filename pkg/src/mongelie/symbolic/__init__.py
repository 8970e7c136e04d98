"""Exact symbolic foundation: rational linear algebra, polynomials,
rational functions, vector fields and differential forms.

All values are immutable after construction and all operations are pure,
so callers may freely share them across threads.
"""

from .fields import VectorField, lie_bracket, lie_derivative
from .forms import DiffForm, exterior_derivative, wedge
from .linalg import (
    MatrixQ,
    invert_rows,
    kernel_rows,
    mat_kernel,
    mat_rank,
    mat_solve,
    rank_rows,
    rref,
    solve_rows,
)
from .poly import (
    Polynomial,
    RatFun,
    count_real_roots,
    parse_poly,
    poly_divexact,
    poly_gcd,
    set_degree_guard,
)

__all__ = [
    "MatrixQ",
    "mat_kernel",
    "mat_solve",
    "mat_rank",
    "rref",
    "rank_rows",
    "kernel_rows",
    "solve_rows",
    "invert_rows",
    "Polynomial",
    "RatFun",
    "parse_poly",
    "poly_gcd",
    "poly_divexact",
    "count_real_roots",
    "set_degree_guard",
    "VectorField",
    "lie_bracket",
    "lie_derivative",
    "DiffForm",
    "wedge",
    "exterior_derivative",
]
