"""Tanaka prolongation of fundamental graded nilpotent Lie algebras.

Degree-k elements are graded maps u sending g_{-i} into the component of
grade k-i (a base component when k-i < 0, a previously computed prolongation
component otherwise) subject to the derivation identity
u([x,y]) = [u(x),y] + [x,u(y)] on all of the negative part.  The solver
treats every block of u as unknown and imposes the identity on all basis
pairs, so the kernel is exactly the derivation space; transitivity
(vanishing on g_{-1} forces vanishing) then holds as a consequence and is
verified in tests rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ComputationFailure, InputError
from .gnla import GradedAlgebra, check_jacobi, is_fundamental, vec_add, vec_scale
from .symbolic.linalg import kernel_rows, solve_rows

Q0 = Fraction(0)
Q1 = Fraction(1)


@dataclass
class GradedMap:
    """A degree-k prolongation element.

    blocks[i] (i >= 1) lists, per basis element of g_{-i}, its image as a
    dense tuple over the basis of the grade k-i component; absent blocks
    mean the source or target space is zero.
    """

    degree: int
    blocks: dict

    def image(self, i, local):
        blk = self.blocks.get(i)
        return blk[local] if blk is not None else None


def _space_dim(base, comps, t, finite_all_known=False):
    if t < 0:
        return len(base.component(t))
    if t < len(comps):
        return len(comps[t])
    return 0 if finite_all_known else None


def _solve_component(base, comps, k):
    """Basis of the degree-k component given components 0..k-1."""
    depth = base.depth()
    src = {i: base.component(-i) for i in range(1, depth + 1)}
    tgt_dim = {}
    for i in range(1, depth + 1):
        t = k - i
        d = len(base.component(t)) if t < 0 else len(comps[t])
        tgt_dim[i] = d

    offsets = {}
    ncols = 0
    for i in range(1, depth + 1):
        if src[i] and tgt_dim[i]:
            offsets[i] = ncols
            ncols += len(src[i]) * tgt_dim[i]
    if ncols == 0:
        return []

    def col(i, local, t):
        return offsets[i] + local * tgt_dim[i] + t

    # bracket of a degree-(k-i) basis element with a base basis element,
    # expressed densely over the grade k-i-b component
    def basis_bracket(i, s, q_global, b):
        t = k - i - b
        out_dim = len(base.component(t)) if t < 0 else len(comps[t]) if 0 <= t < len(comps) else 0
        out = [Q0] * out_dim
        if out_dim == 0:
            return out
        if k - i < 0:
            gs = base.component(k - i)[s]
            vec = base.bracket_basis(gs, q_global)
            locs = {g: loc for loc, g in enumerate(base.component(t))}
            for g, c in vec.items():
                out[locs[g]] += c
        else:
            w = comps[k - i][s]
            img = w.image(b, _local_index(base, q_global))
            if img is not None:
                for t_idx, c in enumerate(img):
                    out[t_idx] += c
        return out

    rows = []
    basis_m = list(range(base.dim))
    for pi, p in enumerate(basis_m):
        for q in basis_m[pi + 1:]:
            a = -base.grades[p]
            b = -base.grades[q]
            tgrade = k - a - b
            out_dim = (
                len(base.component(tgrade))
                if tgrade < 0
                else len(comps[tgrade]) if 0 <= tgrade < len(comps) else 0
            )
            if out_dim == 0:
                continue
            eq = [dict() for _ in range(out_dim)]

            def bump(c_idx, row_idx, val):
                if val:
                    d = eq[row_idx]
                    s = d.get(c_idx, Q0) + val
                    if s:
                        d[c_idx] = s
                    else:
                        del d[c_idx]

            # u([p, q])
            if a + b in offsets:
                locs = {g: loc for loc, g in enumerate(base.component(-(a + b)))}
                for g, c in base.bracket_basis(p, q).items():
                    z = locs[g]
                    for t in range(tgt_dim[a + b]):
                        bump(col(a + b, z, t), t, c)
            # -[u(p), q]
            if a in offsets:
                p_loc = _local_index(base, p)
                for s in range(tgt_dim[a]):
                    vec = basis_bracket(a, s, q, b)
                    for row_idx, c in enumerate(vec):
                        bump(col(a, p_loc, s), row_idx, -c)
            # +[u(q), p]
            if b in offsets:
                q_loc = _local_index(base, q)
                for s in range(tgt_dim[b]):
                    vec = basis_bracket(b, s, p, a)
                    for row_idx, c in enumerate(vec):
                        bump(col(b, q_loc, s), row_idx, c)
            for d in eq:
                if d:
                    rows.append([d.get(c, Q0) for c in range(ncols)])

    sols = kernel_rows(rows, ncols)
    maps = []
    for v in sols:
        blocks = {}
        for i, off in offsets.items():
            n_src = len(src[i])
            n_tgt = tgt_dim[i]
            blocks[i] = [
                tuple(v[off + r * n_tgt + t] for t in range(n_tgt)) for r in range(n_src)
            ]
        maps.append(GradedMap(k, blocks))
    return maps


def _local_index(base, global_idx):
    g = base.grades[global_idx]
    return base.component(g).index(global_idx)


# --------------------------------------------------------------------------
# prolongation result
# --------------------------------------------------------------------------

@dataclass
class H0Result:
    dim: int
    vectors: list  # coefficient combinations over the g_0 basis


class ProlongationResult:
    def __init__(self, base, components, status, top_grade, h0):
        self.base = base
        self.components = components  # list per degree k >= 0 of GradedMap lists
        self.status = status  # "finite" | "capped"
        self.top_grade = top_grade
        self.h0 = h0
        self._algebra = None

    @property
    def is_finite(self):
        return self.status == "finite"

    @property
    def h0dim(self):
        return self.h0.dim

    def graded_dims(self):
        dims = {}
        for g in self.base.grades_present():
            dims[g] = len(self.base.component(g))
        for k, comp in enumerate(self.components):
            if comp:
                dims[k] = len(comp)
        return dict(sorted(dims.items()))

    @property
    def total_dim(self):
        return sum(self.graded_dims().values())

    def nonneg_dims(self):
        return [len(c) for c in self.components[: self.top_grade + 1]]

    # ----- full bracket table ------------------------------------------------
    def algebra(self) -> GradedAlgebra:
        """The prolongation as a graded Lie algebra with explicit structure
        constants.  For capped results only brackets with target grade within
        the computed range are defined; missing pairs raise on access through
        the returned table (they are simply absent)."""
        if self._algebra is None:
            self._algebra = self._assemble()
        return self._algebra

    def _assemble(self):
        base = self.base
        comps = self.components
        names = list(base.names)
        grades = list(base.grades)
        offset = {}
        for k, comp in enumerate(comps):
            offset[k] = len(names)
            for s in range(len(comp)):
                names.append(f"d{k}_{s + 1}")
                grades.append(k)
        glob = {}

        def comp_global(t, local):
            if t < 0:
                return base.component(t)[local]
            return offset[t] + local

        def vec_to_global(t, dense):
            out = {}
            for local, c in enumerate(dense):
                if c:
                    out[comp_global(t, local)] = c
            return out

        brackets = {}

        def put(i, j, vec):
            if i == j or not vec:
                return
            if i < j:
                brackets[(i, j)] = dict(vec)
            else:
                brackets[(j, i)] = {k: -c for k, c in vec.items()}

        for (i, j), vec in base.brackets.items():
            put(i, j, vec)

        # [component k, base]
        for k, comp in enumerate(comps):
            for s, w in enumerate(comp):
                gi = offset[k] + s
                for i_blk, blk in w.blocks.items():
                    t = k - i_blk
                    for local, dense in enumerate(blk):
                        q = base.component(-i_blk)[local]
                        put(gi, q, vec_to_global(t, dense))

        # per-component solver for "element with prescribed g_{-1} action"
        g1 = base.component(-1)
        solver_cache = {}

        def match_component(c):
            if c in solver_cache:
                return solver_cache[c]
            comp = comps[c]
            rows = []
            for x_loc in range(len(g1)):
                tdim = _space_dim(base, comps, c - 1)
                for coord in range(tdim if tdim else 0):
                    rows.append([
                        (w.image(1, x_loc)[coord] if w.image(1, x_loc) is not None else Q0)
                        for w in comp
                    ])
            solver_cache[c] = rows
            return rows

        def lookup(gi, gj):
            if gi == gj:
                return {}
            key = (min(gi, gj), max(gi, gj))
            vec = brackets.get(key, {})
            if gi < gj:
                return vec
            return {k: -c for k, c in vec.items()}

        def bracket_with_vec(gi, sparse):
            out = {}
            for gj, c in sparse.items():
                out = vec_add(out, vec_scale(lookup(gi, gj), c))
            return out

        known_limit = self.top_grade if self.status == "capped" else None
        pairs = []
        for a_deg in range(len(comps)):
            for b_deg in range(a_deg, len(comps)):
                if not comps[a_deg] or not comps[b_deg]:
                    continue
                pairs.append((a_deg, b_deg))
        pairs.sort(key=lambda ab: (ab[0] + ab[1], ab))
        for a_deg, b_deg in pairs:
            total = a_deg + b_deg
            if known_limit is not None and total > known_limit:
                continue
            for si, wa in enumerate(comps[a_deg]):
                gj_start = si + 1 if a_deg == b_deg else 0
                for sj in range(gj_start, len(comps[b_deg])):
                    wb = comps[b_deg][sj]
                    ga = offset[a_deg] + si
                    gb = offset[b_deg] + sj
                    # action on g_{-1}: x -> [wa, wb(x)] - [wb, wa(x)]
                    phi = []
                    for x_loc, x_glob in enumerate(g1):
                        ib = wb.image(1, x_loc)
                        ia = wa.image(1, x_loc)
                        acc = {}
                        if ib is not None:
                            acc = vec_add(acc, bracket_with_vec(ga, vec_to_global(b_deg - 1, ib)))
                        if ia is not None:
                            acc = vec_add(
                                acc, vec_scale(bracket_with_vec(gb, vec_to_global(a_deg - 1, ia)), -Q1)
                            )
                        phi.append(acc)
                    target_dim = len(comps[total]) if total < len(comps) else 0
                    if target_dim == 0:
                        if any(phi):
                            raise ComputationFailure(
                                "bracket of prolongation elements escapes the computed range"
                            )
                        continue
                    # express phi against the g_{-1} blocks of the target component
                    rows = match_component(total)
                    rhs = []
                    tdim = _space_dim(base, comps, total - 1)
                    for x_loc in range(len(g1)):
                        dense = [Q0] * (tdim or 0)
                        for g, c in phi[x_loc].items():
                            gr = grades[g]
                            if gr != total - 1:
                                raise ComputationFailure("graded bracket left its grade")
                            if gr < 0:
                                dense[base.component(gr).index(g)] = c
                            else:
                                dense[g - offset[gr]] = c
                        rhs.extend(dense)
                    sol = solve_rows(rows, rhs) if rows else ([] if not any(rhs) else None)
                    if sol is None:
                        raise ComputationFailure("prolongation bracket not representable")
                    put(ga, gb, {offset[total] + s: c for s, c in enumerate(sol) if c})

        alg = GradedAlgebra(list(zip(names, grades)), brackets, tag=None, validate_grading=True)
        alg.tag = (self.base.tag or "m") + "^"
        return alg

    def _triple_feasible(self, grades, i, j, k):
        # capped tables lack brackets whose target grade exceeds the cap
        if self.status != "capped":
            return True
        gi, gj, gk = grades[i], grades[j], grades[k]
        top = self.top_grade
        return (
            gi + gj <= top and gi + gk <= top and gj + gk <= top and gi + gj + gk <= top
        )

    def verify_jacobi(self, exhaustive=None, sample=20000, seed=0):
        """Jacobi check on the assembled bracket table.

        Exhaustive by default up to dimension 48; larger tables are checked
        on a deterministic sample of triples.  Returns the violation list.
        """
        alg = self.algebra()
        n = alg.dim
        if exhaustive is None:
            exhaustive = n <= 48
        feasible = [
            (i, j, k)
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(j + 1, n)
            if self._triple_feasible(alg.grades, i, j, k)
        ]
        if not exhaustive and len(feasible) > sample:
            import random

            rng = random.Random(seed)
            feasible = rng.sample(feasible, sample)
        return check_jacobi(alg, feasible)


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def compute_g0(algebra: GradedAlgebra):
    """Basis of the grade-preserving derivations, as GradedMaps."""
    if not is_fundamental(algebra):
        raise InputError("input algebra is not fundamental")
    return _solve_component(algebra, [], 0)


def compute_h0(algebra: GradedAlgebra, g0=None) -> H0Result:
    """The subspace of g_0 annihilating every grade below -1.

    Its vanishing certifies that the full prolongation is finite.
    """
    g0 = compute_g0(algebra) if g0 is None else g0
    rows = []
    depth = algebra.depth()
    entries = []
    for i in range(2, depth + 1):
        nsrc = len(algebra.component(-i))
        for local in range(nsrc):
            for t in range(len(algebra.component(-i))):
                entries.append((i, local, t))
    for i, local, t in entries:
        row = []
        for u in g0:
            img = u.image(i, local)
            row.append(img[t] if img is not None else Q0)
        rows.append(row)
    combos = kernel_rows(rows, len(g0))
    return H0Result(dim=len(combos), vectors=combos)


_PROLONG_MEMO = {}


def prolong(algebra: GradedAlgebra, cap=None) -> ProlongationResult:
    """Prolong degree by degree until a zero component certifies finiteness
    or the cap is reached (status 'capped', never an exception).

    Results are memoized on the structure constants; values are immutable.
    """
    if not is_fundamental(algebra):
        raise InputError("input algebra is not fundamental")
    depth = algebra.depth()
    if cap is None:
        cap = 2 * depth + 4
    if cap < 0:
        raise InputError("cap must be non-negative")
    memo_key = (algebra.cache_key(), cap)
    cached = _PROLONG_MEMO.get(memo_key)
    if cached is not None and cached.base.names == algebra.names:
        return cached
    comps = []
    status = "capped"
    top = cap
    for k in range(cap + 2):
        if k > cap:
            break
        comp = _solve_component(algebra, comps, k)
        comps.append(comp)
        if not comp:
            status = "finite"
            top = k - 1
            break
    g0 = comps[0] if comps else []
    h0 = compute_h0(algebra, g0)
    result = ProlongationResult(algebra, comps, status, top, h0)
    if len(_PROLONG_MEMO) < 512:
        _PROLONG_MEMO[memo_key] = result
    return result


def tanaka_dim(algebra: GradedAlgebra, cap=None):
    """Total prolongation dimension, or the string 'capped'."""
    result = prolong(algebra, cap=cap)
    return result.total_dim if result.is_finite else "capped"


# --------------------------------------------------------------------------
# named-relation verification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    left: str
    right: str
    rhs: tuple  # ((Fraction, name), ...)


@dataclass(frozen=True)
class RelationSet:
    unknowns: tuple  # ((name, grade), ...)
    relations: tuple


def verify_structure_relations(result: ProlongationResult, relset: RelationSet):
    """Solve linearly for elements of the prolongation satisfying every
    listed bracket relation; returns (ok, solution dict or None).

    In a relation [left, right] = rhs the entry ``right`` must be a basis
    element of the base; ``left`` and the rhs terms may reference declared
    unknowns living in named graded components.
    """
    alg = result.algebra()
    unames = {}
    col_of = {}
    ncols = 0
    for name, grade in relset.unknowns:
        if name in alg._index:
            raise InputError(f"unknown {name!r} shadows a basis element")
        idxs = alg.component(grade)
        unames[name] = (grade, idxs)
        col_of[name] = ncols
        ncols += len(idxs)

    rows = []
    rhs_vals = []

    for rel in relset.relations:
        if rel.right in unames:
            raise InputError("the right slot of a relation must be a basis element")
        r_idx = alg.index(rel.right)
        if rel.left in unames:
            grade_l, comp_l = unames[rel.left]
        else:
            grade_l, comp_l = None, None
        tgrade = (grade_l if grade_l is not None else alg.grades[alg.index(rel.left)]) + alg.grades[r_idx]
        target = alg.component(tgrade)
        tpos = {g: p for p, g in enumerate(target)}
        lin = [dict() for _ in target]
        const = [Q0 for _ in target]

        def add_lin(colbase, comp_indices, vec_fn, sign):
            for s, gidx in enumerate(comp_indices):
                for g, c in vec_fn(gidx).items():
                    if g not in tpos:
                        raise ComputationFailure("relation leaves its graded component")
                    d = lin[tpos[g]]
                    d[colbase + s] = d.get(colbase + s, Q0) + sign * c

        if comp_l is not None:
            add_lin(col_of[rel.left], comp_l, lambda gi: alg.bracket_basis(gi, r_idx), Q1)
        else:
            l_idx = alg.index(rel.left)
            for g, c in alg.bracket_basis(l_idx, r_idx).items():
                const[tpos[g]] += c

        for coeff, name in rel.rhs:
            coeff = Fraction(coeff)
            if name in unames:
                g_rhs, comp_rhs = unames[name]
                if g_rhs != tgrade:
                    raise InputError(f"rhs unknown {name!r} has grade {g_rhs}, expected {tgrade}")
                base_col = col_of[name]
                for s, gidx in enumerate(comp_rhs):
                    d = lin[tpos[gidx]]
                    d[base_col + s] = d.get(base_col + s, Q0) - coeff
            else:
                gidx = alg.index(name)
                if alg.grades[gidx] != tgrade:
                    raise InputError(f"rhs element {name!r} has the wrong grade")
                const[tpos[gidx]] -= coeff

        for pos in range(len(target)):
            rows.append([lin[pos].get(c, Q0) for c in range(ncols)])
            rhs_vals.append(-const[pos])

    if ncols == 0:
        ok = all(v == 0 for v in rhs_vals)
        return ok, ({} if ok else None)
    sol = solve_rows(rows, rhs_vals)
    if sol is None:
        return False, None
    out = {}
    for name, (grade, idxs) in unames.items():
        base_col = col_of[name]
        out[name] = {idxs[s]: sol[base_col + s] for s in range(len(idxs)) if sol[base_col + s]}
    return True, out
