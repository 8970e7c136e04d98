"""The claim-by-claim reproduction suite.

Each claim is a named callable returning (ok, detail).  The CLI command
``reproduce`` runs them all (optionally filtered) and exits 0/2; the
acceptance test suite runs the same registry one criterion per test.
"""

from __future__ import annotations

from . import gnla as gn
from . import tanaka as tk
from .cohomology import h2_graded, z2_maximal
from .extensions import (
    classify_pure_extensions,
    hilbert_cartan_chain,
    named_cocycle,
    parabolic_tower,
    realize_extension_ode,
)
from .geometry import (
    MongeEquation,
    carnot_model,
    cartan_distribution,
    darboux_triples,
    deprolongable,
    derived_flag,
    generic_point,
    prolong_distribution,
)
from .symmetries import (
    is_symmetry,
    l3plus_check,
    model_symmetries,
    symmetry_commutator_table,
)

GRID = [(m, n) for m in range(1, 7) for n in range(m, 7) if (m, n) not in ((1, 1), (1, 2))]
SYMMETRY_GRID = [(2, 2), (1, 3), (2, 3), (3, 3), (1, 4), (2, 4)]


def expected_growth(m, n):
    if m < n:
        return [2, 1] + [2] * m + [1] * (n - m - 1)
    return [2, 1] + [2] * (n - 1) + [1]


def claim_tanaka_grid():
    bad = []
    for m, n in GRID:
        result = tk.prolong(gn.make_fmn(m, n))
        want = 2 * n + 5 if m == 1 else 2 * n + 4
        if not result.is_finite or result.total_dim != want:
            bad.append((m, n, result.status, result.total_dim))
            continue
        dims = result.graded_dims()
        if m == n:
            ok = (
                dims.get(0) == 2
                and result.top_grade == 0
                and dims.get(-2) == 1
                and dims.get(-m - 2) == 1
            )
        elif m == 1:
            ok = (
                dims.get(0) == 3
                and dims.get(1) == 2
                and all(dims.get(k) == 1 for k in range(2, n - 1))
                and result.top_grade == max(n - 2, 1)
            )
        else:
            ok = (
                dims.get(0) == 3
                and all(dims.get(k) == 1 for k in range(1, n - m))
                and result.top_grade == n - m - 1
            )
        if not ok:
            bad.append((m, n, "grading", dims))
    return not bad, f"grid {len(GRID)} pairs; failures: {bad}" if bad else f"{len(GRID)} pairs ok"


def claim_exceptional_prolongations():
    r = tk.prolong(gn.make_fmn(1, 2))
    dims = r.graded_dims()
    ok1 = r.is_finite and r.total_dim == 14 and [dims[g] for g in (-3, -2, -1, 0, 1, 2, 3)] == [2, 1, 2, 4, 2, 1, 2]
    r2 = tk.prolong(gn.catalog("heis3"), cap=8)
    ok2 = (not r2.is_finite) and r2.nonneg_dims() == [4, 6, 9, 12, 16, 20, 25, 30, 36]
    return ok1 and ok2, f"dim t(1,2)={r.total_dim}, heis3 growth {r2.nonneg_dims()}"


def claim_h0():
    bad = []
    for m, n in GRID:
        if tk.compute_h0(gn.make_fmn(m, n)).dim != 0:
            bad.append((m, n))
    h_heis = tk.compute_h0(gn.catalog("heis3")).dim
    h_goursat = tk.compute_h0(gn.catalog("goursat(4)")).dim
    ok = not bad and h_heis != 0 and h_goursat != 0
    return ok, f"grid h0=0; heis3 h0={h_heis}, goursat h0={h_goursat}; bad={bad}"


def claim_cohomology():
    r12 = h2_graded(gn.make_fmn(1, 2))
    ok1 = {k: rec.h for k, rec in r12.by_grading.items() if rec.h} == {4: 3}
    rp6 = h2_graded(gn.catalog("p(6)"))
    ok2 = {k: rec.h for k, rec in rp6.by_grading.items() if rec.h} == {4: 2, 5: 2}
    parity = []
    for n in range(6, 13):
        dim = len(z2_maximal(gn.catalog(f"p({n})"))[0])
        parity.append((n, dim, 1 if n % 2 else 2))
    ok3 = all(d == want for _, d, want in parity)
    # n = 5: the top grading carries the full 3-dimensional cocycle space
    dim5 = len(z2_maximal(gn.catalog("p(5)"))[0])
    ok4 = dim5 == 3
    okp = all(
        (h2_graded(gn.catalog(f"pprime({2 * l + 1})")).by_grading.get(2 * l) is None
         or h2_graded(gn.catalog(f"pprime({2 * l + 1})")).by_grading[2 * l].h == 0)
        for l in (3, 4, 5)
    )
    ok = ok1 and ok2 and ok3 and ok4 and okp
    return ok, f"H2(f12)~{ok1} H2(p6)~{ok2} parity(6..12)~{ok3} Z2(p5)={dim5} pprime~{okp}"


def claim_extension_classification():
    c5 = classify_pure_extensions(gn.make_fmn(1, 2), 4, match_names=["p(6)", "h6", "ell6"])
    names5 = sorted(c.catalog_match for c in c5)
    ok1 = names5 == ["ell6", "h6", "p(6)"] and not any(c.unseparated for c in c5)
    p6 = gn.catalog("p(6)")
    c4 = classify_pure_extensions(p6, 4, match_names=["ext7_21221", "ext7_21222"])
    c5b = classify_pure_extensions(p6, 5, match_names=["ext7_211211", "ext7_211212"])
    names7 = sorted(c.catalog_match for c in c4) + sorted(c.catalog_match for c in c5b)
    ok2 = names7 == ["ext7_21221", "ext7_21222", "ext7_211211", "ext7_211212"]
    return ok1 and ok2, f"5D->6D {names5}; 6D->7D {names7}"


def claim_realization():
    results = {}
    for label, want in (("p", "p(6)"), ("hyp", "h6"), ("ell", "ell6")):
        r = realize_extension_ode(1, 2, [named_cocycle(1, 2, label)],
                                  match_names=["p(6)", "h6", "ell6"])
        results[label] = (r.fingerprint_match, r.system[-1])
        if r.fingerprint_match != want:
            return False, f"{label} matched {r.fingerprint_match}, wanted {want}"
    ell_g = results["ell"][1].replace(" ", "")
    ok_ell = ell_g in ("v'=-1/6*z''^3-z", "v'=-z-1/6*z''^3")
    return ok_ell, f"{results}"


def claim_parabolic_tower():
    rows = parabolic_tower(12)
    for row in rows:
        if row.n == 5:
            if row.z2_dim != 3 or len(row.extensions) != 3:
                return False, f"n=5 expected the 3-class trichotomy, got {row}"
            continue
        want = 1 if row.n % 2 else 2
        if row.z2_dim != want or len(row.extensions) != want:
            return False, f"n={row.n}: z2 dim {row.z2_dim}, {len(row.extensions)} exts"
        if row.n % 2 == 0:
            dims = {label: d for label, _, d in row.extensions}
            dp = dims.get(f"p({row.n + 1})")
            dq = dims.get(f"pprime({row.n + 1})")
            if dp is None or dq is None or not (isinstance(dq, int) and dq < dp):
                return False, f"n={row.n}: tanaka dims p={dp} pprime={dq}"
            if row.pprime_h2_top != 0:
                return False, f"n={row.n}: pprime top cohomology {row.pprime_h2_top}"
    return True, f"tower 5..12 ok ({len(rows)} rows)"


def claim_geometry():
    for m, n in GRID:
        eq = MongeEquation.model(m, n)
        flag = derived_flag(cartan_distribution(eq), generic_point(eq.chart))
        if flag.growth != expected_growth(m, n):
            return False, f"({m},{n}) growth {flag.growth}"
    for m, n in [(1, 3), (2, 2), (3, 4)]:
        eq = MongeEquation.model(m, n)
        dist = cartan_distribution(eq)
        fps = set()
        for a in range(3):
            c = gn.fingerprint(
                __import__("mongelie.geometry", fromlist=["carnot_at_point"]).carnot_at_point(
                    dist, generic_point(eq.chart, a)
                ).algebra
            )
            fps.add(c)
        if len(fps) != 1 or fps.pop() != gn.fingerprint(gn.make_fmn(m, n)):
            return False, f"({m},{n}) carnot fingerprint varies or mismatches"
    hc = cartan_distribution(MongeEquation.model(1, 2))
    pro = prolong_distribution(hc)
    flag = derived_flag(pro, generic_point(pro.chart))
    if flag.growth != [2, 1, 1, 1, 1]:
        return False, f"prolonged model growth {flag.growth}"
    carnot = carnot_model(pro)
    if tk.tanaka_dim(carnot.algebra) != 14:
        return False, "prolonged model prolongation dimension is not 14"
    eqdeg = MongeEquation.from_text(1, 2, "z2")
    if not deprolongable(cartan_distribution(eqdeg), generic_point(eqdeg.chart)):
        return False, "degenerate case not de-prolongable"
    return True, "growth grid, point-independence, prolonged model, degenerate case ok"


def claim_symmetries():
    for m, n in SYMMETRY_GRID:
        eq = MongeEquation.model(m, n)
        fields = model_symmetries(m, n)
        want = 2 * n + 5 if m == 1 else 2 * n + 4
        if len(fields) != want:
            return False, f"({m},{n}) has {len(fields)} generators"
        if not all(is_symmetry(eq, f) for f in fields.values()):
            return False, f"({m},{n}) symmetry test failed"
        table = symmetry_commutator_table(m, n, fields)
        if not table.matches_expected:
            return False, f"({m},{n}) table mismatches: {table.mismatches[:2]}"
        if not l3plus_check(m, n):
            return False, f"({m},{n}) identification failed"
    return True, f"{len(SYMMETRY_GRID)} models verified"


def claim_darboux():
    triples, count = darboux_triples()
    ok = count == 53 and (3, 3, 1) in triples and (2, 2, 4) not in triples and (1, 1, 6) in triples
    return ok, f"count={count}"


def claim_quotients():
    for name in ("p(6)", "h6", "ell6", "f(2,3)", "ext7_21222", "p(9)"):
        steps = hilbert_cartan_chain(gn.catalog(name))
        if not all(s.cocycles_closed for s in steps):
            return False, f"{name}: chain step failed"
        if gn.grade_profile(steps[-1].algebra).dims != (2, 1, 2):
            return False, f"{name}: chain did not reach the (2,1,2) algebra"
    return True, "extension chains verified"


CLAIMS = [
    ("tanaka-grid", claim_tanaka_grid),
    ("exceptional-prolongations", claim_exceptional_prolongations),
    ("h0-criterion", claim_h0),
    ("cohomology", claim_cohomology),
    ("extension-classification", claim_extension_classification),
    ("realization", claim_realization),
    ("parabolic-tower", claim_parabolic_tower),
    ("geometry", claim_geometry),
    ("symmetries", claim_symmetries),
    ("darboux-triples", claim_darboux),
    ("extension-chains", claim_quotients),
]


def run_claims(name_filter: str = None):
    """Run the claims (optionally substring-filtered); returns result rows."""
    rows = []
    for name, fn in CLAIMS:
        if name_filter and name_filter not in name:
            continue
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"error: {exc}"
        rows.append({"claim": name, "ok": ok, "detail": detail})
    return rows
