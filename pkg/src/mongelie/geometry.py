"""Jet-coordinate geometry of Monge equations: the induced rank-2
distribution, derived flags and growth vectors, Carnot algebras at rational
points, Cauchy characteristics, the de-prolongation test, and distribution
prolongation.

Charts are (x, y0..y{m-1}, z0..z{n}); all point computations use exact
rational evaluation at deterministic generic points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ComputationFailure, InputError
from .gnla import GradedAlgebra, check_gnla
from .symbolic.fields import VectorField, lie_bracket
from .symbolic.linalg import kernel_rows, rank_rows, solve_rows
from .symbolic.poly import Polynomial, RatFun, parse_poly

Q0 = Fraction(0)
Q1 = Fraction(1)


def monge_chart(m: int, n: int):
    return ("x",) + tuple(f"y{i}" for i in range(m)) + tuple(f"z{j}" for j in range(n + 1))


@dataclass(frozen=True)
class MongeEquation:
    """y^(m) = F(x, y, ..., y^(m-1), z, ..., z^(n)) with rational F."""

    m: int
    n: int
    F: RatFun

    def __post_init__(self):
        if not (1 <= self.m <= self.n):
            raise InputError("need 1 <= m <= n")
        if self.F.vars != self.chart:
            raise InputError("F must live on the equation chart")

    @property
    def chart(self):
        return monge_chart(self.m, self.n)

    @staticmethod
    def model(m: int, n: int) -> "MongeEquation":
        chart = monge_chart(m, n)
        zn = Polynomial.var(chart, f"z{n}")
        return MongeEquation(m, n, RatFun.from_poly(zn * zn))

    @staticmethod
    def from_text(m: int, n: int, text: str) -> "MongeEquation":
        chart = monge_chart(m, n)
        return MongeEquation(m, n, RatFun.from_poly(parse_poly(text, chart)))

    def total_derivative(self) -> VectorField:
        """D_x on the equation chart (F substituted in the top y-slot)."""
        chart = self.chart
        comps = {name: RatFun.zero(chart) for name in chart}
        comps["x"] = RatFun.const(chart, 1)
        for i in range(self.m - 1):
            comps[f"y{i}"] = RatFun.var(chart, f"y{i + 1}")
        comps[f"y{self.m - 1}"] = self.F
        for j in range(self.n):
            comps[f"z{j}"] = RatFun.var(chart, f"z{j + 1}")
        return VectorField(chart, [comps[name] for name in chart])


@dataclass
class Distribution:
    chart: tuple
    generators: list

    def __post_init__(self):
        for g in self.generators:
            if g.chart != tuple(self.chart):
                raise InputError("generator chart mismatch")

    @property
    def rank(self):
        return len(self.generators)


def cartan_distribution(eq: MongeEquation) -> Distribution:
    """The rank-2 distribution spanned by D_x and d/dz_n."""
    chart = eq.chart
    return Distribution(chart, [eq.total_derivative(), VectorField.coordinate(chart, f"z{eq.n}")])


def nondegenerate_at(eq: MongeEquation, point) -> bool:
    """Exact evaluation of d^2F/dz_n^2 at the point."""
    zn = f"z{eq.n}"
    return eq.F.diff(zn).diff(zn).evaluate(point) != 0


# --------------------------------------------------------------------------
# generic rational points
# --------------------------------------------------------------------------

def generic_point(chart, attempt: int = 0):
    """Deterministic generic point: x=1, y_i=i+2, z_j=j+3, with offsets on
    re-sampling; other coordinate names get small distinct values."""
    pt = {}
    for pos, name in enumerate(chart):
        head = name.rstrip("0123456789")
        tail = name[len(head):]
        idx = int(tail) if tail else 0
        if head == "x":
            val = 1
        elif head == "y":
            val = idx + 2
        elif head == "z":
            val = idx + 3
        elif head in ("t", "v", "w", "u"):
            val = idx + 2 + ("tvwu".index(head))
        else:
            val = pos + 5
        pt[name] = Fraction(val + attempt)
    return pt


def _evaluate_all(fields, point):
    return [list(f.evaluate(point)) for f in fields]


# --------------------------------------------------------------------------
# derived flags
# --------------------------------------------------------------------------

@dataclass
class FlagReport:
    mode: str
    point: dict
    ranks: list
    growth: list
    levels: list  # generating vector fields per level
    stabilized: bool
    full_rank: bool


def derived_flag(dist: Distribution, point, mode: str = "weak", cap: int = None) -> FlagReport:
    """Grow the flag by brackets, ranking exact evaluations at the point.

    weak:   L_{i+1} = L_i + [generators, L_i]
    strong: L_{i+1} = L_i + [L_i, L_i]
    """
    if mode not in ("weak", "strong"):
        raise InputError("mode must be 'weak' or 'strong'")
    dim = len(dist.chart)
    if cap is None:
        cap = dim + 2
    if rank_rows(_evaluate_all(dist.generators, point)) != dist.rank:
        raise InputError("generators dependent at the base point")
    levels = [list(dist.generators)]
    ranks = [dist.rank]
    new_fields = list(dist.generators)
    stabilized = False
    while len(levels) < cap:
        current = levels[-1]
        if mode == "weak":
            brackets = [lie_bracket(g, f) for g in dist.generators for f in new_fields]
        else:
            brackets = [
                lie_bracket(a, b)
                for ai, a in enumerate(current)
                for b in current[ai + 1:]
            ]
        # prune to a pointwise frame: at a point with locally constant flag
        # ranks the kept fields span the same module nearby, so discarding
        # rank-redundant brackets does not change any later level
        rows = _evaluate_all(current, point)
        added = []
        for b in brackets:
            if b.is_zero():
                continue
            val = list(b.evaluate(point))
            if rank_rows(rows + [val]) > len(rows):
                rows.append(val)
                added.append(b)
        r = rank_rows(rows)
        if r == ranks[-1]:
            stabilized = True
            break
        levels.append(current + added)
        new_fields = added
        ranks.append(r)
        if r == dim:
            stabilized = True
            break
    growth = [ranks[0]] + [b - a for a, b in zip(ranks, ranks[1:])]
    return FlagReport(
        mode=mode,
        point=dict(point),
        ranks=ranks,
        growth=growth,
        levels=levels,
        stabilized=stabilized,
        full_rank=ranks[-1] == dim,
    )


# --------------------------------------------------------------------------
# Carnot algebra at a point
# --------------------------------------------------------------------------

@dataclass
class CarnotAtPoint:
    point: dict
    algebra: GradedAlgebra
    adapted_frame: list  # (level, field) pairs in basis order


def carnot_at_point(dist: Distribution, point) -> CarnotAtPoint:
    """Adapted frame by pivoting evaluations per filtration level; brackets
    evaluated at the point and reduced modulo the lower level."""
    flag = derived_flag(dist, point, mode="weak")
    if not flag.full_rank:
        raise InputError("flag does not reach full rank at this point")
    dim = len(dist.chart)
    frame = []  # (level, field, value)
    rows = []

    def try_add(level, field):
        val = list(field.evaluate(point))
        if rank_rows(rows + [val]) > len(rows):
            rows.append(val)
            frame.append((level, field, val))
            return True
        return False

    for level, fields in enumerate(flag.levels, start=1):
        for f in fields:
            if len(rows) == dim:
                break
            try_add(level, f)
    if len(rows) != dim:
        raise ComputationFailure("adapted frame incomplete")

    frame_sorted = sorted(range(dim), key=lambda i: (frame[i][0], i))
    ordered = [frame[i] for i in frame_sorted]
    levels = [lv for lv, _, _ in ordered]
    values = [val for _, _, val in ordered]
    cols = list(map(list, zip(*values)))

    basis = []
    level_count = {}
    for lv in levels:
        level_count[lv] = level_count.get(lv, 0) + 1
        basis.append((f"f{lv}_{level_count[lv]}", -lv))

    brackets = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            lv = levels[i] + levels[j]
            w = lie_bracket(ordered[i][1], ordered[j][1])
            val = list(w.evaluate(point))
            coeffs = solve_rows(cols, val)
            if coeffs is None:
                raise ComputationFailure("bracket outside the frame span")
            vec = {}
            for s, c in enumerate(coeffs):
                if c and levels[s] == lv:
                    vec[s] = c
                elif c and levels[s] > lv:
                    raise ComputationFailure("bracket violates the filtration")
            if vec:
                brackets[(i, j)] = vec
    algebra = GradedAlgebra(basis, brackets, tag=None)
    report = check_gnla(algebra)
    if not (report.grading_ok and report.jacobi_ok):
        raise ComputationFailure(f"point is not regular: {report.violations[:3]}")
    return CarnotAtPoint(dict(point), algebra, [(lv, f) for lv, f, _ in ordered])


def carnot_model(dist: Distribution, attempts: int = 5) -> CarnotAtPoint:
    """Carnot algebra at a deterministic generic point, re-sampling on
    degeneracy (max ``attempts``)."""
    last = None
    for a in range(attempts):
        try:
            return carnot_at_point(dist, generic_point(dist.chart, a))
        except (InputError, ComputationFailure, ZeroDivisionError) as exc:
            last = exc
    raise ComputationFailure(f"no regular generic point found: {last}")


# --------------------------------------------------------------------------
# Cauchy characteristics and de-prolongation
# --------------------------------------------------------------------------

def cauchy_characteristics(dist: Distribution, point, inside: Distribution = None):
    """Constant-coefficient combinations v of ``inside`` generators (default:
    the distribution itself) with [v, g] in the span of dist at the point,
    for every generator g of dist."""
    inside = dist if inside is None else inside
    span_rows = _evaluate_all(dist.generators, point)
    rows = []
    for g in dist.generators:
        bracket_vals = [list(lie_bracket(v, g).evaluate(point)) for v in inside.generators]
        # condition: sum_l c_l * bracket_vals[l] lies in span(dist at point)
        # encode via rank: append to span and require no rank growth, i.e.
        # the component in a complement vanishes.  Use kernel formulation:
        # stack [span; w] and demand w reduce to span -> quotient rows.
        comp = _complement_projector(span_rows, len(dist.chart))
        for proj in comp:
            rows.append([
                sum(proj[t] * bracket_vals[l][t] for t in range(len(proj)))
                for l in range(len(inside.generators))
            ])
    combos = kernel_rows(rows, len(inside.generators))
    fields = []
    for c in combos:
        f = VectorField.zero(dist.chart)
        for coeff, gen in zip(c, inside.generators):
            if coeff:
                f = f + gen.scale(coeff)
        fields.append(f)
    return combos, fields


def _complement_projector(span_rows, dim):
    """Rows of functionals vanishing on the span (a basis of its annihilator)."""
    return kernel_rows([list(r) for r in span_rows], dim) if span_rows else kernel_rows([], dim)


def deprolongable(dist: Distribution, point) -> bool:
    """True iff some direction inside the distribution is a Cauchy
    characteristic of the derived distribution; cross-checked against the
    growth vector starting (2,1,1)."""
    flag = derived_flag(dist, point, mode="weak")
    d2_fields = flag.levels[1] if len(flag.levels) > 1 else flag.levels[0]
    d2 = Distribution(dist.chart, d2_fields)
    combos, _ = cauchy_characteristics(d2, point, inside=dist)
    has_char = len(combos) > 0
    growth_says = len(flag.growth) >= 3 and flag.growth[:3] == [2, 1, 1]
    if len(flag.growth) == 2 and flag.growth[:2] == [2, 1] and flag.full_rank:
        # 4-dimensional Engel-type start: (2,1,1) truncated by dimension
        growth_says = False
    if has_char != growth_says:
        raise ComputationFailure(
            f"de-prolongation criteria disagree: characteristic={has_char}, "
            f"growth={flag.growth}"
        )
    return has_char


def prolong_distribution(dist: Distribution, vertical_index: int = 1) -> Distribution:
    """Affine prolongation <U + t V, d/dt> with V the chosen vertical."""
    if dist.rank != 2:
        raise InputError("prolongation needs a rank-2 distribution")
    if vertical_index not in (0, 1):
        raise InputError("vertical generator index must be 0 or 1")
    tname = "t"
    k = 1
    while tname in dist.chart:
        tname = f"t{k}"
        k += 1
    chart = tuple(dist.chart) + (tname,)
    u = dist.generators[1 - vertical_index].with_chart(chart)
    v = dist.generators[vertical_index].with_chart(chart)
    t = RatFun.var(chart, tname)
    return Distribution(chart, [u + v.scale(t), VectorField.coordinate(chart, tname)])


# --------------------------------------------------------------------------
# admissible Darboux triples
# --------------------------------------------------------------------------

def darboux_triples():
    """Enumerate triples (m1, m2, k) with m1 + m2 + k <= 7 + delta, where
    delta = 1 when m1 = m2 = 1 or (m1 = 1 and k > 0), requiring m1 <= m2
    when k = 0.  Returns (triples, count)."""
    out = []
    for m1 in range(1, 10):
        for m2 in range(1, 10):
            for k in range(0, 10):
                if k == 0 and m1 > m2:
                    continue
                delta = 1 if (m1 == 1 and m2 == 1) or (m1 == 1 and k > 0) else 0
                if m1 + m2 + k <= 7 + delta:
                    out.append((m1, m2, k))
    return out, len(out)
