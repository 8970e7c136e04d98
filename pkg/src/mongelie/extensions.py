"""Central extensions of graded nilpotent Lie algebras and their
realization as underdetermined ODE systems.

Pure-grading central extensions are built from 2-cocycles, matched to the
catalog via isomorphism fingerprints, classified per grading by sampling the
projectivized cohomology with gauge-orbit data, and realized geometrically by
solving d(beta) = alpha for a potential against the flat model coframe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cohomology import CochainSpace, CoeffModule, GaugeAction, ce_differential, h2_graded
from .errors import ComputationFailure, InputError
from .geometry import Distribution, MongeEquation, carnot_model
from .gnla import (
    CATALOG_SAMPLE,
    GradedAlgebra,
    catalog,
    check_gnla,
    fingerprint,
    grade_profile,
    quotient_by_indices,
    quotient_top_grade,
)
from .symbolic.fields import VectorField
from .symbolic.forms import DiffForm, exterior_derivative, wedge
from .symbolic.linalg import invert_rows, rank_rows, solve_rows
from .symbolic.poly import Polynomial, RatFun
from .tanaka import prolong, tanaka_dim

Q0 = Fraction(0)
Q1 = Fraction(1)


# --------------------------------------------------------------------------
# central extensions from cocycles
# --------------------------------------------------------------------------

@dataclass
class CentralExtension:
    base: GradedAlgebra
    grading: int
    cocycles: list  # vectors over the C^2_k wedge basis
    wedge_basis: list  # index pairs of the C^2_k basis
    result: GradedAlgebra
    nontrivial: bool


def _cocycle_closed(algebra, k, vec, wedge_basis):
    module = CoeffModule.trivial(algebra)
    c2 = CochainSpace(algebra, 2, module, k)
    if [b for b, _ in c2.basis] != list(wedge_basis):
        raise InputError("cocycle vector indexed against the wrong basis")
    d2, _ = ce_differential(c2)
    return all(
        sum((row[i] * vec[i] for i in range(len(vec))), Q0) == 0 for row in d2
    )


def _classes_independent_mod_boundaries(algebra, k, vectors):
    module = CoeffModule.trivial(algebra)
    c1 = CochainSpace(algebra, 1, module, k)
    b_rows = []
    if c1.dim:
        d1, _ = ce_differential(c1)
        b_rows = [[d1[r][c] for r in range(len(d1))] for c in range(c1.dim)]
    b_rank = rank_rows(b_rows)
    return rank_rows(b_rows + [list(v) for v in vectors]) == b_rank + len(vectors)


def central_extend(algebra: GradedAlgebra, k: int, cocycles) -> CentralExtension:
    """Extend by d central generators in grade -k, one per given 2-cocycle
    of pure grading k (k > 2).  New brackets: [x,y] += w_l(x,y) a_l."""
    if k <= 2:
        raise InputError("pure-grading central extensions need grading k > 2")
    module = CoeffModule.trivial(algebra)
    c2 = CochainSpace(algebra, 2, module, k)
    wedge_basis = [b for b, _ in c2.basis]
    vecs = []
    for c in cocycles:
        v = [Fraction(x) for x in c]
        if len(v) != len(wedge_basis):
            raise InputError("cocycle vector has the wrong length")
        if not _cocycle_closed(algebra, k, v, wedge_basis):
            raise InputError("cocycle is not closed")
        vecs.append(v)
    d = len(vecs)
    basis = list(zip(algebra.names, algebra.grades))
    newnames = []
    for l in range(d):
        name = f"a{l + 1}"
        while name in algebra.names:
            name += "x"
        newnames.append(name)
        basis.append((name, -k))
    brackets = {key: dict(vec) for key, vec in algebra.brackets.items()}
    for l, v in enumerate(vecs):
        target = algebra.dim + l
        for pos, (i, j) in enumerate(wedge_basis):
            c = v[pos]
            if c:
                cur = brackets.setdefault((i, j), {})
                cur[target] = cur.get(target, Q0) + c
    result = GradedAlgebra(basis, brackets, tag=None)
    nontrivial = d > 0 and _classes_independent_mod_boundaries(algebra, k, vecs)
    return CentralExtension(algebra, k, vecs, wedge_basis, result, nontrivial)


def quotient_matches_base(ext: CentralExtension) -> bool:
    """The quotient of the extension by the new generators must reproduce
    the base structure constants exactly."""
    drop = list(range(ext.base.dim, ext.result.dim))
    q = quotient_by_indices(ext.result, drop)
    if q.names != ext.base.names or q.grades != ext.base.grades:
        return False
    return q.brackets == ext.base.brackets


# --------------------------------------------------------------------------
# classification of 1-dimensional pure extensions
# --------------------------------------------------------------------------

@dataclass
class ClassifiedExtension:
    h_class: list  # projective representative in H coordinates
    cocycle: list  # lift over the wedge basis
    orbit_tangent_dim: int
    fixed_line: bool
    fingerprint: tuple
    catalog_match: str | None
    unseparated: bool = False


def _projective_sample(dim, entries=(0, 1, -1, 2, -2)):
    """Deterministic sample of projective points: all vectors over the entry
    set with positive first nonzero coordinate, deduplicated up to scaling."""
    seen = set()
    out = []
    for vec in product(entries, repeat=dim):
        if not any(vec):
            continue
        first = next(c for c in vec if c)
        if first < 0:
            vec = tuple(-c for c in vec)
        # normalize by the first nonzero entry to dedupe projectively
        key = tuple(Fraction(c, abs(first)) for c in vec)
        if key in seen:
            continue
        seen.add(key)
        out.append([Fraction(c) for c in vec])
    return out


def _match_catalog(fp, candidates=None):
    for name in candidates if candidates is not None else CATALOG_SAMPLE:
        try:
            if fingerprint(catalog(name)) == fp:
                return name
        except InputError:
            continue
    return None


def classify_pure_extensions(algebra: GradedAlgebra, k: int, match_names=None):
    """One representative per fingerprint among the sampled projective
    classes in H^2_k, with gauge-orbit data.

    Fixed lines of the infinitesimal gauge action are kept as their own
    candidates; open strata are represented through the deterministic
    rational sample.  Classes whose extensions share a fingerprint but show
    different orbit data are flagged unseparated.
    """
    report = h2_graded(algebra)
    rec = report.by_grading.get(k)
    if rec is None or rec.h == 0:
        return []
    ga = GaugeAction(algebra, k, report=report)
    groups = {}
    order = []
    for h_vec in _projective_sample(rec.h):
        cocycle = [Q0] * len(rec.basis)
        for c, rep in zip(h_vec, rec.reps):
            for i, x in enumerate(rep):
                cocycle[i] += c * x
        ext = central_extend(algebra, k, [cocycle])
        fp = fingerprint(ext.result)
        info = ClassifiedExtension(
            h_class=list(h_vec),
            cocycle=cocycle,
            orbit_tangent_dim=ga.orbit_tangent_dim(h_vec),
            fixed_line=ga.is_fixed_line(h_vec),
            fingerprint=fp,
            catalog_match=None,
        )
        if fp not in groups:
            groups[fp] = [info]
            order.append(fp)
        else:
            groups[fp].append(info)
    out = []
    for fp in order:
        members = groups[fp]
        rep = next((m for m in members if m.fixed_line), members[0])
        signatures = {(m.orbit_tangent_dim, m.fixed_line) for m in members}
        rep.unseparated = len(signatures) > 1
        rep.catalog_match = _match_catalog(fp, match_names)
        out.append(rep)
    return out


# --------------------------------------------------------------------------
# the parabolic tower
# --------------------------------------------------------------------------

@dataclass
class TowerRow:
    n: int
    z2_dim: int
    extensions: list  # (label, fingerprint, tanaka dim or 'capped')
    pprime_h2_top: int | None


def parabolic_tower(n_max: int = 12):
    """Maximal-grading central extensions of p(n) for n = 5..n_max.

    For n >= 6 the cocycle space in the top grading has dimension 1 (odd n)
    or 2 (even n); the extra even extension has no further maximal-grading
    extension and a strictly smaller prolongation.  At n = 5 the top grading
    coincides with the full 3-dimensional cohomology (the 6-dimensional
    trichotomy), so the parity pattern starts at n = 6.
    """
    if n_max > 16:
        raise InputError("tower bound too large (max 16)")
    rows = []
    for n in range(5, n_max + 1):
        pn = catalog(f"p({n})")
        k = pn.depth() + 1
        classes = classify_pure_extensions(
            pn, k, match_names=[f"p({n + 1})", f"pprime({n + 1})", "h6", "ell6"]
        )
        from .cohomology import z2_maximal

        zbasis, _ = z2_maximal(pn)
        exts = []
        pprime_h2 = None
        for c in classes:
            label = c.catalog_match or "unmatched"
            ext = central_extend(pn, k, [c.cocycle])
            exts.append((label, c.fingerprint, tanaka_dim(ext.result)))
            if label == f"pprime({n + 1})":
                rep2 = h2_graded(ext.result).by_grading.get(k + 1)
                pprime_h2 = rep2.h if rep2 else 0
        rows.append(TowerRow(n, len(zbasis), exts, pprime_h2))
    return rows


# --------------------------------------------------------------------------
# geometric realization of extensions
# --------------------------------------------------------------------------

def model_frame(eq: MongeEquation):
    """The exact nilpotent frame of the flat model: vector fields realizing
    the structure constants of f(m, n) on the equation chart."""
    m, n = eq.m, eq.n
    chart = eq.chart
    alg = _make_fmn(m, n)
    dx = eq.total_derivative()
    zn = Polynomial.var(chart, f"z{n}")
    fields = {}
    fields["e1"] = -dx
    fields["e1p"] = VectorField.coordinate(chart, f"z{n}")
    two_zn = RatFun.from_poly(zn * 2)
    for j in range(2, m + 3):
        comps = {name: RatFun.zero(chart) for name in chart}
        if n - j + 1 >= 0:
            comps[f"z{n - j + 1}"] = RatFun.const(chart, 1)
        if 0 <= m - j + 1 <= m - 1:
            comps[f"y{m - j + 1}"] = two_zn
        fields[f"e{j}"] = VectorField(chart, [comps[name] for name in chart])
    for i in range(3, m + 3):
        comps = {name: RatFun.zero(chart) for name in chart}
        comps[f"y{m - i + 2}"] = RatFun.const(chart, 2)
        fields[f"e{i}p"] = VectorField(chart, [comps[name] for name in chart])
    for kk in range(m + 3, n + 2):
        fields[f"e{kk}"] = VectorField.coordinate(chart, f"z{n - kk + 1}")
    ordered = [fields[name] for name in alg.names]
    return alg, ordered


def _make_fmn(m, n):
    from .gnla import make_fmn

    return make_fmn(m, n)


def model_coframe(eq: MongeEquation):
    """1-forms dual to the model frame, by exact matrix inversion."""
    alg, frame = model_frame(eq)
    chart = eq.chart
    dim = len(chart)
    mat = [[frame[s].components[t] for s in range(dim)] for t in range(dim)]
    inv = invert_rows(mat, one=RatFun.const(chart, 1))
    if inv is None:
        raise ComputationFailure("model frame is singular")
    coframe = []
    for a in range(dim):
        coframe.append(DiffForm(chart, 1, {(t,): inv[a][t] for t in range(dim)}))
    return alg, frame, coframe


def _chart_weights(m, n, chart):
    w = {}
    for name in chart:
        if name == "x":
            w[name] = 1
        elif name.startswith("y"):
            i = int(name[1:])
            w[name] = 3 + (m - 1 - i)
        elif name.startswith("z"):
            j = int(name[1:])
            w[name] = n + 1 - j
    return w


def _weighted_monomials(chart, weights, target, max_degree):
    """Exponent tuples of total weight ``target`` and degree <= max_degree."""
    names = list(chart)
    out = []

    def rec(pos, remaining, degree, acc):
        if remaining == 0:
            out.append(tuple(acc + [0] * (len(names) - pos)))
            return
        if pos == len(names) or degree == 0:
            return
        wname = weights[names[pos]]
        max_k = min(degree, remaining // wname if wname > 0 else 0)
        for k in range(max_k + 1):
            rec(pos + 1, remaining - k * wname, degree - k, acc + [k])

    rec(0, target, max_degree, [])
    return out


def solve_potential(eq: MongeEquation, alpha: DiffForm, grading: int, degree_bound=None):
    """Solve d(beta) = alpha by a linear ansatz over weight-homogeneous
    polynomial 1-form coefficients; the degree bound is raised once (to 2x)
    before giving up."""
    chart = eq.chart
    weights = _chart_weights(eq.m, eq.n, chart)
    base_bound = (eq.n + 1) + 2 if degree_bound is None else degree_bound
    for bound in (base_bound, 2 * base_bound):
        ansatz = []  # (coordinate index, exponent tuple)
        for t, name in enumerate(chart):
            target = grading - weights[name]
            if target < 0:
                continue
            for exps in _weighted_monomials(chart, weights, target, bound):
                ansatz.append((t, exps))
        # d(beta) coefficients are linear in the ansatz coefficients
        cols = []
        for t, exps in ansatz:
            beta = DiffForm(chart, 1, {(t,): Polynomial(chart, {exps: Q1})})
            cols.append(exterior_derivative(beta))
        keys = set()
        for form in cols + [alpha]:
            for idx, coeff in form.terms.items():
                if not coeff.is_polynomial():
                    raise ComputationFailure("non-polynomial target in potential solve")
                for e in coeff.as_polynomial().terms:
                    keys.add((idx, e))
        keys = sorted(keys)
        rows = []
        rhs = []
        for idx, e in keys:
            row = []
            for form in cols:
                coeff = form.terms.get(idx)
                row.append(
                    coeff.as_polynomial().terms.get(e, Q0) if coeff is not None else Q0
                )
            rows.append(row)
            acoeff = alpha.terms.get(idx)
            rhs.append(acoeff.as_polynomial().terms.get(e, Q0) if acoeff is not None else Q0)
        sol = solve_rows(rows, rhs)
        if sol is not None:
            terms = {}
            for (t, exps), c in zip(ansatz, sol):
                if c:
                    cur = terms.setdefault(t, {})
                    cur[exps] = cur.get(exps, Q0) + c
            beta = DiffForm(
                chart, 1, {(t,): Polynomial(chart, tt) for t, tt in terms.items()}
            )
            if exterior_derivative(beta) - alpha == DiffForm.zero(chart, 2):
                return beta
            raise ComputationFailure("potential verification failed")
    raise ComputationFailure(
        f"no polynomial potential within degree bound {2 * base_bound}"
    )


@dataclass
class RealizedExtension:
    equation: MongeEquation
    grading: int
    betas: list  # gauged potential 1-forms on the base chart
    g_functions: list  # RatFun right-hand sides of v_l' = g_l
    system: list  # printable ODE system strings
    extension: CentralExtension
    extended_distribution: Distribution
    fingerprint: tuple
    fingerprint_match: str | None


def realize_extension_ode(m: int, n: int, cocycles, match_names=None,
                          grading=None) -> RealizedExtension:
    """Realize pure-grading cocycles (grading k > 3) of f(m, n) as an
    underdetermined ODE system on the flat model: each cocycle is turned
    into a closed 2-form alpha via the model coframe, a polynomial potential
    beta with d(beta) = alpha is found, gauged so its dz_n component
    vanishes, and read off as v' = g with g = beta(D_x).

    When cochain spaces of different gradings share a dimension the vector
    length cannot determine the grading; pass it explicitly then."""
    eq = MongeEquation.model(m, n)
    chart = eq.chart
    alg, frame, coframe = model_coframe(eq)
    module = CoeffModule.trivial(alg)
    cocycles = [list(map(Fraction, c)) for c in cocycles]
    if grading is not None:
        k = int(grading)
        c2_check = CochainSpace(alg, 2, module, k)
        if any(len(v) != c2_check.dim for v in cocycles):
            raise InputError("cocycle length does not match the stated grading")
    else:
        gradings = set()
        for vec in cocycles:
            gradings.add(_pure_grading_of(alg, vec))
        if len(gradings) != 1:
            raise InputError("all cocycles must share one pure grading")
        k = gradings.pop()
    if k <= 3:
        raise InputError("realization needs grading k > 3")
    ext = central_extend(alg, k, cocycles)

    c2 = CochainSpace(alg, 2, module, k)
    wedge_basis = [b for b, _ in c2.basis]

    betas = []
    gs = []
    dxfield = eq.total_derivative()
    for vec in cocycles:
        alpha = DiffForm.zero(chart, 2)
        for pos, (i, j) in enumerate(wedge_basis):
            if vec[pos]:
                alpha = alpha + wedge(coframe[i], coframe[j]).scale(vec[pos])
        if not exterior_derivative(alpha).is_zero():
            raise ComputationFailure("realized cocycle is not closed")
        beta = solve_potential(eq, alpha, k)
        # gauge away the dz_n component (it integrates to an exact form)
        zn_idx = chart.index(f"z{n}")
        coeff = beta.terms.get((zn_idx,))
        if coeff is not None and not coeff.is_zero():
            prim = coeff.as_polynomial().integrate(f"z{n}")
            beta = beta - exterior_derivative(DiffForm.function(chart, prim))
        if (zn_idx,) in beta.terms:
            raise ComputationFailure("gauge step failed to remove the dz_n slot")
        if not (exterior_derivative(beta) - alpha).is_zero():
            raise ComputationFailure("gauged potential no longer solves d(beta) = alpha")
        g = beta.apply(dxfield)
        betas.append(beta)
        gs.append(g)

    vnames = ["v"] if len(gs) == 1 else [f"v{l + 1}" for l in range(len(gs))]
    extchart = chart + tuple(vnames)
    gens = [
        eq.total_derivative().with_chart(extchart),
        VectorField.coordinate(extchart, f"z{n}"),
    ]
    lifted = gens[0]
    for vname, g in zip(vnames, gs):
        lifted = lifted + VectorField.coordinate(extchart, vname).scale(g.with_vars(extchart))
    extended = Distribution(extchart, [lifted, gens[1]])
    carnot = carnot_model(extended)
    fp = fingerprint(carnot.algebra)
    if fp != fingerprint(ext.result):
        raise ComputationFailure(
            "realized distribution does not match the algebraic extension"
        )
    system = [_model_equation_text(m, n)]
    for vname, g in zip(vnames, gs):
        system.append(f"{vname}' = {_display_function(g, m, n)}")
    return RealizedExtension(
        equation=eq,
        grading=k,
        betas=betas,
        g_functions=gs,
        system=system,
        extension=ext,
        extended_distribution=extended,
        fingerprint=fp,
        fingerprint_match=_match_catalog(fp, match_names),
    )


def _pure_grading_of(alg, vec):
    module = CoeffModule.trivial(alg)
    gradings = set()
    for k in range(2, 2 * alg.depth() + 1):
        c2 = CochainSpace(alg, 2, module, k)
        if len(vec) == c2.dim and c2.dim:
            gradings.add(k)
    # disambiguate by requiring a nonzero entry pattern fit; gradings with
    # equal C^2 dimension cannot be told apart from the vector alone
    if len(gradings) == 1:
        return gradings.pop()
    raise InputError(
        "cocycle length does not determine its grading; pass cocycles of "
        "pure grading via the classify output"
    )


_NAMED_COCYCLES = {
    # 5D -> 6D classes over f(1,2), in the wedge basis of grading 4
    "p": ("e3^e1",),
    "hyp": ("e3^e1p", "e3p^e1"),
    "ell": ("e3^e1", "e3p^e1p"),
}


def named_cocycle(m: int, n: int, label: str):
    """The classical extension classes of the Hilbert-Cartan algebra by
    name: 'p' (parabolic), 'hyp' (hyperbolic), 'ell' (elliptic)."""
    if (m, n) != (1, 2):
        raise InputError("named classes exist only over the (1,2) model")
    alg = _make_fmn(1, 2)
    module = CoeffModule.trivial(alg)
    c2 = CochainSpace(alg, 2, module, 4)
    wedge_basis = [b for b, _ in c2.basis]
    label = {"par": "p", "parabolic": "p", "h": "hyp", "hyperbolic": "hyp",
             "e": "ell", "elliptic": "ell"}.get(label, label)
    if label not in _NAMED_COCYCLES:
        raise InputError(f"unknown class {label!r}; use p, hyp or ell")
    vec = [Q0] * len(wedge_basis)
    for mono in _NAMED_COCYCLES[label]:
        hi, lo = mono.split("^")
        i, j = alg.index(hi), alg.index(lo)
        # stored orientation is ascending index; w_hi ^ w_lo = -(w_lo ^ w_hi)
        if i < j:
            vec[wedge_basis.index((i, j))] += Q1
        else:
            vec[wedge_basis.index((j, i))] -= Q1
    return vec


def _display_name(name, m, n):
    if name == "x":
        return "x"
    head, idx = name[0], int(name[1:])
    base = "y" if head == "y" else "z"
    if idx == 0:
        return base
    if idx <= 3:
        return base + "'" * idx
    return f"{base}^({idx})"


def _display_function(g: RatFun, m, n):
    text = str(g)
    chart = g.vars
    # replace longest names first so z10 is not caught by z1
    for name in sorted(chart, key=len, reverse=True):
        text = text.replace(name, _display_name(name, m, n))
    return text


def _model_equation_text(m, n):
    lhs = "y" + ("'" * m if m <= 3 else f"^({m})")
    rhs = "z" + ("'" * n if n <= 3 else f"^({n})")
    return f"{lhs} = ({rhs})^2"


# --------------------------------------------------------------------------
# the extension chain down to the 5-dimensional algebra
# --------------------------------------------------------------------------

@dataclass
class ChainStep:
    algebra: GradedAlgebra
    dropped_grade: int
    dropped_dim: int
    cocycles_closed: bool


def hilbert_cartan_chain(algebra: GradedAlgebra):
    """Quotient by the top grade repeatedly, verifying each step is a
    central extension, down to the unique 5-dimensional (2,1,2) algebra.

    Returns the list of steps, or raises for profiles not of type
    (2,1,2,...).
    """
    profile = grade_profile(algebra).dims
    if len(profile) < 3 or profile[:3] != (2, 1, 2):
        raise InputError("not an algebra of type (2,1,2,...)")
    report = check_gnla(algebra)
    if not report.fundamental:
        raise InputError("chain requires a fundamental algebra")
    steps = []
    current = algebra
    while current.dim > 5:
        depth = current.depth()
        comp = current.component(-depth)
        quot = quotient_top_grade(current)
        # extract the cocycles that rebuild the dropped generators
        module = CoeffModule.trivial(quot)
        c2 = CochainSpace(quot, 2, module, depth)
        wedge_basis = [b for b, _ in c2.basis]
        ok = True
        vectors = []
        for a_idx in comp:
            vec = [Q0] * len(wedge_basis)
            for pos, (i, j) in enumerate(wedge_basis):
                ni, nj = current.names[i], current.names[j]
                w = current.bracket_basis(current.index(ni), current.index(nj))
                vec[pos] = w.get(a_idx, Q0)
            vectors.append(vec)
            if not _cocycle_closed(quot, depth, vec, wedge_basis):
                ok = False
        if vectors:
            rebuilt = central_extend(quot, depth, vectors)
            if not quotient_matches_base(rebuilt):
                ok = False
        steps.append(ChainStep(current, -depth, len(comp), ok))
        current = quot
    if grade_profile(current).dims != (2, 1, 2):
        raise ComputationFailure("chain did not terminate on the (2,1,2) algebra")
    steps.append(ChainStep(current, 0, 0, True))
    return steps
