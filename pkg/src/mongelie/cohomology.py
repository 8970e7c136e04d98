"""Graded Chevalley-Eilenberg cohomology of graded nilpotent Lie algebras.

Conventions: for a coefficient module V the differential is

    (dw)(x_0..x_q) = sum_i (-1)^i x_i . w(..x^_i..)
                   + sum_{i<j} (-1)^{i+j} w([x_i,x_j], ..x^_i..x^_j..)

so with trivial coefficients (dw)(x,y) = -w([x,y]), matching the dual
Maurer-Cartan equations of the algebra.  A q-cochain has grading k when it
maps g_{i_1} x .. x g_{i_q} into V_{i_1+..+i_q+k}; the grading filtration is
applied before solving, so each grading is one small exact linear system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ComputationFailure, InputError
from .gnla import GradedAlgebra
from .symbolic.linalg import kernel_rows, rank_rows, rref, solve_rows

Q0 = Fraction(0)
Q1 = Fraction(1)


class CoeffModule:
    """A finite-dimensional graded module with verified action matrices."""

    def __init__(self, algebra, dim, grades, action, name="explicit", verify=True):
        self.algebra = algebra
        self.dim = dim
        self.grades = tuple(int(g) for g in grades)
        if len(self.grades) != dim:
            raise InputError("one grade per module basis vector required")
        self.action = action  # list per algebra basis element of dim x dim rows
        self.name = name
        if verify:
            self._verify_representation()

    def _verify_representation(self):
        n = self.algebra.dim
        d = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                lhs = _mat_commutator(self.action[i], self.action[j], d)
                rhs = [[Q0] * d for _ in range(d)]
                for k, c in self.algebra.bracket_basis(i, j).items():
                    for r in range(d):
                        for s in range(d):
                            rhs[r][s] += c * self.action[k][r][s]
                if lhs != rhs:
                    raise InputError(
                        f"action matrices fail the representation identity on "
                        f"({self.algebra.names[i]}, {self.algebra.names[j]})"
                    )

    def act(self, i, vec):
        """Apply the action of basis element i to a dense module vector."""
        return [
            sum((self.action[i][r][s] * vec[s] for s in range(self.dim)), Q0)
            for r in range(self.dim)
        ]

    @classmethod
    def trivial(cls, algebra):
        n = algebra.dim
        return cls(algebra, 1, (0,), [[[Q0]] for _ in range(n)], name="trivial", verify=False)

    @classmethod
    def adjoint(cls, algebra):
        n = algebra.dim
        action = [algebra.ad_matrix(i) for i in range(n)]
        return cls(algebra, n, algebra.grades, action, name="adjoint", verify=False)


def _mat_commutator(a, b, d):
    ab = [[sum((a[r][k] * b[k][s] for k in range(d)), Q0) for s in range(d)] for r in range(d)]
    ba = [[sum((b[r][k] * a[k][s] for k in range(d)), Q0) for s in range(d)] for r in range(d)]
    return [[ab[r][s] - ba[r][s] for s in range(d)] for r in range(d)]


class CochainSpace:
    """Basis of q-cochains of a fixed grading: (index combo, module slot)."""

    def __init__(self, algebra: GradedAlgebra, q: int, module: CoeffModule, grading: int):
        self.algebra = algebra
        self.q = q
        self.module = module
        self.grading = grading
        basis = []
        for combo in combinations(range(algebra.dim), q):
            w = sum(algebra.grades[i] for i in combo)
            for v in range(module.dim):
                if module.grades[v] - w == grading:
                    basis.append((combo, v))
        self.basis = basis
        self.index = {b: i for i, b in enumerate(basis)}

    @property
    def dim(self):
        return len(self.basis)


def ce_differential(space: CochainSpace) -> list:
    """Matrix rows of d: C^q_k -> C^{q+1}_k over the canonical bases."""
    alg = space.algebra
    mod = space.module
    target = CochainSpace(alg, space.q + 1, mod, space.grading)
    rows = [[Q0] * space.dim for _ in range(target.dim)]
    for row_idx, (J, w_slot) in enumerate(target.basis):
        # action terms: sum_l (-1)^l x_{j_l} . w(J minus l)
        for l, a in enumerate(J):
            rest = J[:l] + J[l + 1:]
            col_map = [(rest, v) for v in range(mod.dim)]
            for v in range(mod.dim):
                col = space.index.get((rest, v))
                if col is None:
                    continue
                coeff = mod.action[a][w_slot][v]
                if coeff:
                    rows[row_idx][col] += (-1) ** l * coeff
        # bracket terms: sum_{l<t} (-1)^{l+t} w([x_{j_l}, x_{j_t}], rest)
        for l in range(len(J)):
            for t in range(l + 1, len(J)):
                rest = tuple(x for p, x in enumerate(J) if p != l and p != t)
                for z, c in alg.bracket_basis(J[l], J[t]).items():
                    if z in rest:
                        continue
                    merged = tuple(sorted(rest + (z,)))
                    pos = merged.index(z)
                    sign = (-1) ** (l + t) * (-1) ** pos
                    col = space.index.get((merged, w_slot))
                    if col is None:
                        continue
                    rows[row_idx][col] += sign * c
    return rows, target


@dataclass
class GradingRecord:
    z: int
    b: int
    h: int
    reps: list  # cocycle vectors over the C^2 basis of this grading
    basis: list  # the C^2 basis labels (index combos)


@dataclass
class CohomologyReport:
    algebra: GradedAlgebra
    degree: int
    by_grading: dict
    total: int


def _canonical_reps(boundary_rows, cocycle_basis, ncols):
    """Reduced-echelon representatives of cocycles modulo boundaries."""
    b_red, b_pivots = rref(boundary_rows) if boundary_rows else ([], [])
    stacked = [list(r) for r in boundary_rows] + [list(v) for v in cocycle_basis]
    all_red, all_pivots = rref(stacked) if stacked else ([], [])
    b_set = set(b_pivots)
    reps = []
    for r, piv in zip(all_red, all_pivots):
        if piv not in b_set:
            reps.append(list(r))
    return reps


def h2_graded(algebra: GradedAlgebra, module: CoeffModule = None) -> CohomologyReport:
    """Per-grading Z/B/H dimensions of H^2 with canonical representatives.

    For a graded nilpotent algebra the central extensions of pure grading -k
    are classified by the grading-k part computed here.
    """
    if module is None:
        module = CoeffModule.trivial(algebra)
    depth = algebra.depth()
    by = {}
    total = 0
    max_grading = 2 * depth + max(module.grades) if module.dim else 2 * depth
    min_grading = 2 + min(module.grades) if module.dim else 2
    for k in range(min(2, min_grading), max_grading + 1):
        c2 = CochainSpace(algebra, 2, module, k)
        if c2.dim == 0:
            continue
        c1 = CochainSpace(algebra, 1, module, k)
        d1_rows = []
        if c1.dim:
            d1_rows_t, target = ce_differential(c1)
            if target.basis != c2.basis:
                raise ComputationFailure("cochain bases out of order")
            # columns of d1 are boundaries; store them as rows
            d1_rows = [[d1_rows_t[r][c] for r in range(len(d1_rows_t))] for c in range(c1.dim)]
        d2_rows, _ = ce_differential(c2)
        zbasis = kernel_rows(d2_rows, c2.dim)
        zdim = len(zbasis)
        bdim = rank_rows(d1_rows) if d1_rows else 0
        h = zdim - bdim
        if h < 0:
            raise ComputationFailure("negative cohomology dimension")
        reps = _canonical_reps(d1_rows, zbasis, c2.dim)
        if zdim or bdim:
            by[k] = GradingRecord(zdim, bdim, h, reps, [b for b, _ in c2.basis])
        total += h
    return CohomologyReport(algebra, 2, by, total)


def z2_maximal(algebra: GradedAlgebra):
    """Basis of the 2-cocycles in the maximal grading (depth + 1)."""
    k = algebra.depth() + 1
    module = CoeffModule.trivial(algebra)
    c2 = CochainSpace(algebra, 2, module, k)
    d2_rows, _ = ce_differential(c2)
    basis = kernel_rows(d2_rows, c2.dim)
    return basis, [b for b, _ in c2.basis]


def h1_module(algebra: GradedAlgebra, module: CoeffModule):
    """Graded dimensions of H^1 with coefficients in the given module."""
    gradings = set()
    for g in algebra.grades:
        for mg in module.grades:
            gradings.add(mg - g)
    out = {}
    for k in sorted(gradings):
        c1 = CochainSpace(algebra, 1, module, k)
        if c1.dim == 0:
            continue
        c0 = CochainSpace(algebra, 0, module, k)
        d1_rows, _ = ce_differential(c1)
        zdim = len(kernel_rows(d1_rows, c1.dim))
        bdim = 0
        if c0.dim:
            d0_rows, target = ce_differential(c0)
            cols = [[d0_rows[r][c] for r in range(len(d0_rows))] for c in range(c0.dim)]
            bdim = rank_rows(cols)
        h = zdim - bdim
        if h:
            out[k] = h
    return out


# --------------------------------------------------------------------------
# infinitesimal gauge action of g_0 on H^2_k
# --------------------------------------------------------------------------

@dataclass
class GaugeClassInfo:
    vector: list  # class coordinates in the representative basis
    orbit_tangent_dim: int
    fixed_line: bool


@dataclass
class GaugeActionReport:
    grading: int
    h_dim: int
    matrices: list  # action of each g_0 basis derivation on H^2_k
    classes: list  # GaugeClassInfo for the canonical representatives


def _derivation_on_base(u, algebra):
    """Dense matrix of a degree-0 GradedMap on the whole algebra basis."""
    n = algebra.dim
    m = [[Q0] * n for _ in range(n)]
    for i_blk, blk in u.blocks.items():
        comp = algebra.component(-i_blk)
        for local, dense in enumerate(blk):
            src = comp[local]
            for t, c in enumerate(dense):
                m[comp[t]][src] = c
    return m


class GaugeAction:
    """Action of the degree-0 derivations on a fixed grading of H^2."""

    def __init__(self, algebra: GradedAlgebra, k: int, g0=None, report=None):
        from .tanaka import compute_g0

        self.algebra = algebra
        self.k = k
        self.g0 = compute_g0(algebra) if g0 is None else g0
        self.report = h2_graded(algebra) if report is None else report
        rec = self.report.by_grading.get(k)
        if rec is None:
            rec = GradingRecord(0, 0, 0, [], [])
        self.record = rec
        module = CoeffModule.trivial(algebra)
        self.c2 = CochainSpace(algebra, 2, module, k)
        self.cochain_mats = [self._cochain_matrix(u) for u in self.g0]
        self._h_setup()

    def _cochain_matrix(self, u):
        """(u.w)(x,y) = -w(ux, y) - w(x, uy) on the C^2_k basis."""
        um = _derivation_on_base(u, self.algebra)
        n = self.c2.dim
        mat = [[Q0] * n for _ in range(n)]
        for col, (pair, _) in enumerate(self.c2.basis):
            p, q = pair
            # contributions: -w(u x_a, x_b) - w(x_a, u x_b) evaluated on basis pairs
            for row, ((a, b), _) in enumerate(self.c2.basis):
                val = Q0
                # w = dual pair (p,q): w(x,y) antisymmetric
                def w_eval(i, j):
                    if i == j:
                        return Q0
                    if (i, j) == (p, q):
                        return Q1
                    if (j, i) == (p, q):
                        return -Q1
                    return Q0

                for z in range(self.algebra.dim):
                    cza = um[z][a]
                    if cza:
                        val -= cza * w_eval(z, b)
                    czb = um[z][b]
                    if czb:
                        val -= czb * w_eval(a, z)
                if val:
                    mat[row][col] = val
        return mat

    def _h_setup(self):
        rec = self.record
        self.h_dim = rec.h
        reps = [list(v) for v in rec.reps]
        module = CoeffModule.trivial(self.algebra)
        c1 = CochainSpace(self.algebra, 1, module, self.k)
        b_rows = []
        if c1.dim:
            d1_rows, _ = ce_differential(c1)
            b_rows = [[d1_rows[r][c] for r in range(len(d1_rows))] for c in range(c1.dim)]
        self._b_rows = [r for r in b_rows if any(r)]
        self._reps = reps
        # solve [B; reps]^T x = v to extract H coordinates
        self._mix = self._b_rows + reps

    def h_coordinates(self, cocycle):
        """Coordinates of a cocycle's class in the representative basis."""
        if not self._mix:
            return []
        cols = list(zip(*self._mix))
        sol = solve_rows([list(c) for c in cols], list(cocycle))
        if sol is None:
            raise ComputationFailure("vector is not a cocycle of this grading")
        return list(sol[len(self._b_rows):])

    def class_action(self, h_coords):
        """Images of a class under each g_0 generator, in H coordinates."""
        cocycle = [Q0] * self.c2.dim
        for c, rep in zip(h_coords, self._reps):
            for i, v in enumerate(rep):
                cocycle[i] += c * v
        out = []
        for mat in self.cochain_mats:
            img = [sum((mat[r][c] * cocycle[c] for c in range(self.c2.dim)), Q0)
                   for r in range(self.c2.dim)]
            out.append(self.h_coordinates(img))
        return out

    def orbit_tangent_dim(self, h_coords):
        return rank_rows(self.class_action(h_coords))

    def is_fixed_line(self, h_coords):
        rows = self.class_action(h_coords) + [list(h_coords)]
        return rank_rows(rows) <= 1

    def h_matrices(self):
        """Action matrices of each g_0 basis derivation on H^2_k."""
        mats = []
        for gi in range(len(self.g0)):
            cols = []
            for s in range(self.h_dim):
                unit = [Q1 if t == s else Q0 for t in range(self.h_dim)]
                cols.append(self.class_action(unit)[gi])
            mats.append([[cols[c][r] for c in range(self.h_dim)] for r in range(self.h_dim)])
        return mats


def gauge_action(algebra: GradedAlgebra, k: int) -> GaugeActionReport:
    """Action matrices of g_0 on H^2_k plus per-representative orbit data."""
    ga = GaugeAction(algebra, k)
    classes = []
    for s in range(ga.h_dim):
        unit = [Q1 if t == s else Q0 for t in range(ga.h_dim)]
        classes.append(
            GaugeClassInfo(
                vector=unit,
                orbit_tangent_dim=ga.orbit_tangent_dim(unit),
                fixed_line=ga.is_fixed_line(unit),
            )
        )
    return GaugeActionReport(k, ga.h_dim, ga.h_matrices(), classes)
