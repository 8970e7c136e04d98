import random
from fractions import Fraction

import pytest

from mongelie.cohomology import CochainSpace, CoeffModule, h2_graded
from mongelie.errors import InputError
from mongelie.extensions import (
    central_extend,
    classify_pure_extensions,
    hilbert_cartan_chain,
    model_coframe,
    model_frame,
    named_cocycle,
    parabolic_tower,
    quotient_matches_base,
    realize_extension_ode,
    solve_potential,
)
from mongelie.gnla import catalog, check_gnla, fingerprint, grade_profile, make_fmn
from mongelie.symbolic.forms import DiffForm, exterior_derivative, wedge

Q = Fraction


def cocycle_by_names(algebra, k, terms):
    """Build a cocycle vector from {(hi, lo): coeff} in descending orientation."""
    c2 = CochainSpace(algebra, 2, CoeffModule.trivial(algebra), k)
    basis = [b for b, _ in c2.basis]
    vec = [Q(0)] * len(basis)
    for (hi, lo), coeff in terms.items():
        i, j = algebra.index(hi), algebra.index(lo)
        if i < j:
            vec[basis.index((i, j))] -= Q(coeff)
        else:
            vec[basis.index((j, i))] += Q(coeff)
    return vec


def test_central_extend_p6():
    a = make_fmn(1, 2)
    vec = cocycle_by_names(a, 4, {("e3", "e1"): 1})
    ext = central_extend(a, 4, [vec])
    assert ext.nontrivial
    assert quotient_matches_base(ext)
    assert check_gnla(ext.result).ok
    assert fingerprint(ext.result) == fingerprint(catalog("p(6)"))


def test_central_extend_h6():
    a = make_fmn(1, 2)
    vec = cocycle_by_names(a, 4, {("e3", "e1p"): 1, ("e3p", "e1"): 1})
    ext = central_extend(a, 4, [vec])
    assert fingerprint(ext.result) == fingerprint(catalog("h6"))


def test_trivial_extension_flagged():
    a = make_fmn(1, 2)
    zero = [Q(0)] * 4
    ext = central_extend(a, 4, [zero])
    assert not ext.nontrivial
    rep = check_gnla(ext.result)
    assert rep.jacobi_ok and not rep.fundamental  # split extension


def test_coboundary_extension_splits():
    """Extending by a coboundary is a split extension: the defining
    1-cochain exhibits a complement."""
    p6 = catalog("p(6)")
    c1 = CochainSpace(p6, 1, CoeffModule.trivial(p6), 4)
    from mongelie.cohomology import ce_differential

    d1, c2 = ce_differential(c1)
    coboundary = [d1[r][0] for r in range(len(d1))]
    ext = central_extend(p6, 4, [coboundary])
    assert not ext.nontrivial
    rep = check_gnla(ext.result)
    assert rep.jacobi_ok and not rep.fundamental


def test_non_closed_cocycle_rejected():
    a = catalog("p(6)")
    bad = cocycle_by_names(a, 5, {("e4", "e1p"): 1})  # not closed alone
    with pytest.raises(InputError):
        central_extend(a, 5, [bad])


def test_low_grading_rejected():
    with pytest.raises(InputError):
        central_extend(make_fmn(1, 2), 2, [])


def test_classification_5d_to_6d():
    classes = classify_pure_extensions(make_fmn(1, 2), 4,
                                       match_names=["p(6)", "h6", "ell6"])
    assert len(classes) == 3
    assert sorted(c.catalog_match for c in classes) == ["ell6", "h6", "p(6)"]
    assert not any(c.unseparated for c in classes)
    by_name = {c.catalog_match: c for c in classes}
    assert by_name["p(6)"].orbit_tangent_dim == 2
    assert by_name["h6"].orbit_tangent_dim == 3
    assert by_name["ell6"].orbit_tangent_dim == 3


def test_classification_6d_to_7d():
    p6 = catalog("p(6)")
    c4 = classify_pure_extensions(p6, 4, match_names=["ext7_21221", "ext7_21222"])
    c5 = classify_pure_extensions(p6, 5, match_names=["ext7_211211", "ext7_211212"])
    assert sorted(c.catalog_match for c in c4) == ["ext7_21221", "ext7_21222"]
    assert sorted(c.catalog_match for c in c5) == ["ext7_211211", "ext7_211212"]
    fixed4 = [c.catalog_match for c in c4 if c.fixed_line]
    fixed5 = [c.catalog_match for c in c5 if c.fixed_line]
    assert fixed4 == ["ext7_21221"]  # the f(2,3) class
    assert fixed5 == ["ext7_211211"]  # the p(7) class


def test_classification_empty_when_no_cohomology():
    assert classify_pure_extensions(catalog("pprime(7)"), 6) == []


def test_parabolic_tower():
    rows = parabolic_tower(10)
    byn = {r.n: r for r in rows}
    assert byn[5].z2_dim == 3 and len(byn[5].extensions) == 3
    for n in range(6, 11):
        want = 1 if n % 2 else 2
        assert byn[n].z2_dim == want and len(byn[n].extensions) == want
    for n in (6, 8, 10):
        dims = {label: d for label, _, d in byn[n].extensions}
        assert dims[f"pprime({n + 1})"] < dims[f"p({n + 1})"]
        assert byn[n].pprime_h2_top == 0


def test_model_frame_realizes_structure_constants():
    from mongelie.symbolic.fields import lie_bracket
    from mongelie.symbolic.linalg import solve_rows

    for m, n in [(1, 2), (2, 3), (1, 4)]:
        alg, frame = model_frame(__import__("mongelie.geometry", fromlist=["MongeEquation"]).MongeEquation.model(m, n))
        chart = frame[0].chart
        # brackets of frame fields equal the structure constants exactly
        for i in range(alg.dim):
            for j in range(i + 1, alg.dim):
                w = lie_bracket(frame[i], frame[j])
                want = alg.bracket_basis(i, j)
                acc = frame[0].scale(0)
                for k, c in want.items():
                    acc = acc + frame[k].scale(c)
                assert (w - acc).is_zero(), (m, n, alg.names[i], alg.names[j])


def test_potential_solver_against_euler_homotopy():
    """Independent check: for weight-homogeneous closed alpha the interior
    product with the weighted Euler field divided by the weight is also a
    primitive, so d of both agree."""
    from mongelie.extensions import _chart_weights
    from mongelie.geometry import MongeEquation
    from mongelie.symbolic.poly import Polynomial, RatFun

    eq = MongeEquation.model(1, 2)
    chart = eq.chart
    alg, frame, coframe = model_coframe(eq)
    w = dict(zip(alg.names, coframe))
    alpha = wedge(w["e3"], w["e1"]) + wedge(w["e3p"], w["e1p"])
    beta = solve_potential(eq, alpha, 4)
    assert exterior_derivative(beta) - alpha == DiffForm.zero(chart, 2)
    weights = _chart_weights(1, 2, chart)
    # iota_E alpha / k with E the weighted Euler field
    from mongelie.symbolic.fields import VectorField

    euler = VectorField(
        chart,
        [RatFun.from_poly(Polynomial.var(chart, v) * weights[v]) for v in chart],
    )
    contracted_terms = {}
    for (i, j), coeff in alpha.terms.items():
        for a, b, sign in ((i, j, 1), (j, i, -1)):
            c = coeff * euler.components[a] * sign
            cur = contracted_terms.get((b,))
            contracted_terms[(b,)] = c if cur is None else cur + c
    iota = DiffForm(chart, 1, contracted_terms).scale(Q(1, 4))
    assert (exterior_derivative(iota) - alpha).is_zero()


def test_realizations_match_catalog():
    want = {"p": "p(6)", "hyp": "h6", "ell": "ell6"}
    for label, target in want.items():
        r = realize_extension_ode(1, 2, [named_cocycle(1, 2, label)],
                                  match_names=["p(6)", "h6", "ell6"])
        assert r.fingerprint_match == target
        for beta in r.betas:
            zn = r.equation.chart.index("z2")
            assert (zn,) not in beta.terms


def test_realization_explicit_forms():
    r = realize_extension_ode(1, 2, [named_cocycle(1, 2, "ell")])
    g = r.g_functions[0]
    chart = r.equation.chart
    from mongelie.symbolic.poly import parse_poly

    assert g.as_polynomial() == parse_poly("-z0 - 1/6*z2^3", chart)
    rp = realize_extension_ode(1, 2, [named_cocycle(1, 2, "p")])
    assert rp.g_functions[0].as_polynomial() == parse_poly("-z0", chart)
    rh = realize_extension_ode(1, 2, [named_cocycle(1, 2, "hyp")])
    assert rh.g_functions[0].as_polynomial() == parse_poly("-1/2*y0", chart)


def test_realization_low_grading_rejected():
    a = make_fmn(1, 2)
    with pytest.raises(InputError):
        realize_extension_ode(1, 2, [cocycle_by_names(a, 3, {("e2", "e1"): 1})])


def test_two_dimensional_extension():
    a = make_fmn(1, 2)
    v1 = cocycle_by_names(a, 4, {("e3", "e1"): 1})
    v2 = cocycle_by_names(a, 4, {("e3p", "e1p"): 1})
    ext = central_extend(a, 4, [v1, v2])
    assert ext.nontrivial and quotient_matches_base(ext)
    assert grade_profile(ext.result).dims == (2, 1, 2, 2)
    r = realize_extension_ode(1, 2, [v1, v2])
    assert len(r.system) == 3 and r.system[0] == "y' = (z'')^2"


def test_seven_dimensional_realizations():
    """The two maximal-grading extensions of the 6D parabolic algebra
    realize over the (1,3) model as the expected ODE systems."""
    classes = classify_pure_extensions(make_fmn(1, 3), 5,
                                       match_names=["p(7)", "pprime(7)"])
    by = {c.catalog_match: c for c in classes}
    r = realize_extension_ode(1, 3, [by["pprime(7)"].cocycle], grading=5,
                              match_names=["p(7)", "pprime(7)"])
    assert r.fingerprint_match == "pprime(7)"
    from mongelie.symbolic.poly import parse_poly

    chart = r.equation.chart
    assert r.g_functions[0].as_polynomial() == parse_poly("-1/2*z2^2", chart)
    r2 = realize_extension_ode(1, 3, [by["p(7)"].cocycle], grading=5,
                               match_names=["p(7)", "pprime(7)"])
    assert r2.fingerprint_match == "p(7)"
    assert r2.g_functions[0].as_polynomial() == parse_poly("z0", chart)

    c4 = classify_pure_extensions(make_fmn(1, 3), 4,
                                  match_names=["f(2,3)", "ext7_21222"])
    by4 = {c.catalog_match: c for c in c4}
    r3 = realize_extension_ode(1, 3, [by4["ext7_21222"].cocycle], grading=4,
                               match_names=["f(2,3)", "ext7_21222"])
    assert r3.fingerprint_match == "ext7_21222"
    r4 = realize_extension_ode(1, 3, [by4["f(2,3)"].cocycle], grading=4,
                               match_names=["f(2,3)", "ext7_21222"])
    assert r4.fingerprint_match == "f(2,3)"


def test_realization_ambiguous_grading_needs_hint():
    classes = classify_pure_extensions(make_fmn(1, 3), 5,
                                       match_names=["p(7)", "pprime(7)"])
    vec = classes[0].cocycle
    with pytest.raises(InputError):
        realize_extension_ode(1, 3, [vec])  # length 4 fits gradings 4 and 5


def test_hilbert_cartan_chain():
    steps = hilbert_cartan_chain(catalog("f(2,3)"))
    assert [s.dropped_dim for s in steps] == [2, 0]
    assert grade_profile(steps[-1].algebra).dims == (2, 1, 2)
    steps = hilbert_cartan_chain(catalog("ell6"))
    assert len(steps) == 2 and all(s.cocycles_closed for s in steps)
    with pytest.raises(InputError):
        hilbert_cartan_chain(catalog("goursat(4)"))
