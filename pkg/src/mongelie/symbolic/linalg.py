"""Exact dense linear algebra over the rationals.

Everything here is deterministic: kernels come out in reduced-echelon form,
solutions set free variables to zero in echelon order.  The routines are
generic over the coefficient field (they only use +, -, *, / and truthiness),
so the same elimination code serves ``Fraction`` matrices and the small
rational-function matrices used for coframe inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InputError

Q0 = Fraction(0)
Q1 = Fraction(1)


@dataclass(frozen=True)
class MatrixQ:
    """Dense matrix of Fractions, row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise InputError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise InputError("ragged matrix")

    @staticmethod
    def from_rows(rows):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        return MatrixQ(len(rows), ncols, rows)

    @staticmethod
    def zero(rows, cols):
        return MatrixQ(rows, cols, tuple(tuple(Q0 for _ in range(cols)) for _ in range(rows)))

    @staticmethod
    def identity(n):
        return MatrixQ(n, n, tuple(tuple(Q1 if i == j else Q0 for j in range(n)) for i in range(n)))

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(r[j] for r in self.entries)

    def mul_vec(self, v):
        if len(v) != self.cols:
            raise InputError("vector length mismatch")
        return tuple(sum((r[j] * v[j] for j in range(self.cols)), Q0) for r in self.entries)

    def mul(self, other):
        if self.cols != other.rows:
            raise InputError("matrix dimension mismatch")
        ot = list(zip(*other.entries)) if other.entries else []
        return MatrixQ(
            self.rows,
            other.cols,
            tuple(
                tuple(sum((r[k] * c[k] for k in range(self.cols)), Q0) for c in ot)
                for r in self.entries
            ),
        )

    def transpose(self):
        return MatrixQ(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else ())


def rref(rows):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns).

    ``rows`` is a list of lists over any exact field; input is not mutated.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank_rows(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def kernel_rows(rows, ncols, one=Q1):
    """Reduced-echelon basis of the right null space of the matrix ``rows``.

    An empty matrix (no rows) yields the standard basis of the domain.
    """
    zero = one - one
    if not rows:
        basis = []
        for j in range(ncols):
            v = [zero] * ncols
            v[j] = one
            basis.append(v)
        return basis
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [zero] * ncols
        v[j] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][j]
        basis.append(v)
    return basis


def solve_rows(rows, b, one=Q1):
    """One exact solution of ``rows @ x = b`` or None when inconsistent.

    Free variables are set to zero in echelon order, so the particular
    solution is deterministic.
    """
    zero = one - one
    nrows = len(rows)
    if nrows == 0:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [bv] for r, bv in zip(rows, b)]
    red, pivots = rref(aug)
    # A pivot in the last (augmented) column means the system is inconsistent.
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def invert_rows(rows, one=Q1):
    """Inverse of a square matrix over an exact field; None when singular."""
    n = len(rows)
    zero = one - one
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [r[n:] for r in red]


def mat_kernel(M: MatrixQ):
    """Canonical kernel basis of a rational matrix, as MatrixQ rows."""
    return [tuple(v) for v in kernel_rows([list(r) for r in M.entries], M.cols)]


def mat_solve(M: MatrixQ, b):
    """Solve Mx = b exactly; returns None on an inconsistent system."""
    if len(b) != M.rows:
        raise InputError("right-hand side length mismatch")
    if M.rows == 0:
        return tuple(Q0 for _ in range(M.cols))
    sol = solve_rows([list(r) for r in M.entries], list(b))
    return None if sol is None else tuple(sol)


def mat_rank(M: MatrixQ):
    return rank_rows([list(r) for r in M.entries])
