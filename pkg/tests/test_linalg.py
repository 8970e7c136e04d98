import random
from fractions import Fraction

import pytest

from mongelie.symbolic import MatrixQ, mat_kernel, mat_rank, mat_solve

from oracles import bareiss_rank

Q = Fraction


def rand_matrix(rng, rows, cols, span=9):
    return MatrixQ.from_rows(
        [[Q(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(cols)] for _ in range(rows)]
    )


def test_kernel_identity_is_empty():
    assert mat_kernel(MatrixQ.identity(2)) == []


def test_kernel_rank_one():
    assert mat_kernel(MatrixQ.from_rows([[1, 2], [2, 4]])) == [(Q(-2), Q(1))]


def test_kernel_empty_matrix_gives_standard_basis():
    basis = mat_kernel(MatrixQ(0, 3, ()))
    assert basis == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_kernel_against_fraction_free_oracle():
    rng = random.Random(7)
    for _ in range(25):
        m = rand_matrix(rng, 6, 9)
        basis = mat_kernel(m)
        rank = bareiss_rank([list(r) for r in m.entries])
        assert len(basis) == 9 - rank
        for v in basis:
            assert all(x == 0 for x in m.mul_vec(v))
        # kernel vectors are linearly independent
        assert bareiss_rank([list(v) for v in basis]) == len(basis)


def test_solve_identity():
    b = (Q(3), Q(-5, 7))
    assert mat_solve(MatrixQ.identity(2), b) == b


def test_solve_free_variable_convention():
    assert mat_solve(MatrixQ.from_rows([[1, 1]]), [Q(2)]) == (Q(2), Q(0))


def test_solve_inconsistent_returns_none():
    m = MatrixQ.from_rows([[1, 1], [1, 1]])
    assert mat_solve(m, [Q(1), Q(2)]) is None


def test_solve_residual_exactly_zero():
    rng = random.Random(11)
    for _ in range(25):
        m = rand_matrix(rng, 5, 7)
        x0 = [Q(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(7)]
        b = m.mul_vec(x0)
        sol = mat_solve(m, b)
        assert sol is not None
        assert m.mul_vec(sol) == b


def test_rank_plus_kernel_dim_is_column_count():
    rng = random.Random(13)
    for _ in range(30):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = rand_matrix(rng, rows, cols, span=4)
        assert mat_rank(m) + len(mat_kernel(m)) == cols


def test_matrix_validation():
    with pytest.raises(Exception):
        MatrixQ(2, 2, ((Q(1),),))
