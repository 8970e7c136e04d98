from fractions import Fraction

import pytest

from mongelie.errors import InputError
from mongelie.geometry import (
    Distribution,
    MongeEquation,
    carnot_at_point,
    carnot_model,
    cartan_distribution,
    cauchy_characteristics,
    darboux_triples,
    deprolongable,
    derived_flag,
    generic_point,
    prolong_distribution,
)
from mongelie.gnla import fingerprint, grade_profile, make_fmn
from mongelie.symbolic.fields import VectorField
from mongelie.symbolic.poly import parse_poly

Q = Fraction


def test_cartan_distribution_components():
    eq = MongeEquation.model(1, 2)
    d = cartan_distribution(eq)
    dx = d.generators[0]
    chart = eq.chart
    assert dx.component("x") == parse_poly("1", chart)
    assert dx.component("y0") == parse_poly("z2^2", chart)
    assert dx.component("z0") == parse_poly("z1", chart)
    assert dx.component("z1") == parse_poly("z2", chart)
    assert dx.component("z2").is_zero()
    assert d.generators[1] == VectorField.coordinate(chart, "z2")


def test_nondegeneracy():
    from mongelie.geometry import nondegenerate_at

    p = generic_point(MongeEquation.model(1, 2).chart)
    assert nondegenerate_at(MongeEquation.model(1, 2), p)
    assert not nondegenerate_at(MongeEquation.from_text(1, 2, "z2"), p)
    cubic = MongeEquation.from_text(1, 2, "z2^3")
    pt0 = dict(p)
    pt0["z2"] = Q(0)
    assert not nondegenerate_at(cubic, pt0)
    pt1 = dict(p)
    pt1["z2"] = Q(1)
    assert nondegenerate_at(cubic, pt1)


def test_growth_vectors():
    cases = {(1, 2): [2, 1, 2], (2, 3): [2, 1, 2, 2], (2, 2): [2, 1, 2, 1],
             (1, 4): [2, 1, 2, 1, 1]}
    for (m, n), want in cases.items():
        eq = MongeEquation.model(m, n)
        flag = derived_flag(cartan_distribution(eq), generic_point(eq.chart))
        assert flag.growth == want, (m, n)
        assert flag.full_rank


def test_degenerate_growth_stabilizes_below_full_rank():
    eq = MongeEquation.from_text(1, 2, "z2")
    flag = derived_flag(cartan_distribution(eq), generic_point(eq.chart))
    # y - z' is a first integral, so the flag stops at corank 1
    assert flag.growth == [2, 1, 1]
    assert flag.stabilized and not flag.full_rank


def test_weak_equals_strong_on_models():
    for m, n in [(1, 3), (2, 2), (2, 4), (3, 3)]:
        eq = MongeEquation.model(m, n)
        d = cartan_distribution(eq)
        p = generic_point(eq.chart)
        weak = derived_flag(d, p, mode="weak")
        strong = derived_flag(d, p, mode="strong")
        assert weak.growth == strong.growth, (m, n)


def test_carnot_at_point_and_point_independence():
    for m, n in [(1, 2), (2, 2), (2, 3)]:
        eq = MongeEquation.model(m, n)
        d = cartan_distribution(eq)
        fps = {fingerprint(carnot_at_point(d, generic_point(eq.chart, a)).algebra)
               for a in range(3)}
        assert len(fps) == 1
        assert fps.pop() == fingerprint(make_fmn(m, n))


def test_cauchy_characteristics():
    # the derived distribution of the Goursat-type degenerate model has a
    # characteristic direction inside the original distribution
    eq = MongeEquation.from_text(1, 2, "z2")
    d = cartan_distribution(eq)
    p = generic_point(eq.chart)
    flag = derived_flag(d, p)
    d2 = Distribution(eq.chart, flag.levels[1])
    combos, fields = cauchy_characteristics(d2, p, inside=d)
    assert len(combos) == 1
    # the nondegenerate model has none
    eq2 = MongeEquation.model(1, 2)
    d = cartan_distribution(eq2)
    flag = derived_flag(d, p)
    d2 = Distribution(eq2.chart, flag.levels[1])
    combos, _ = cauchy_characteristics(d2, p, inside=d)
    assert combos == []


def test_cauchy_full_tangent():
    chart = ("x", "y")
    full = Distribution(chart, [VectorField.coordinate(chart, "x"),
                                VectorField.coordinate(chart, "y")])
    combos, _ = cauchy_characteristics(full, generic_point(chart))
    assert len(combos) == 2


def test_deprolongable():
    p = generic_point(MongeEquation.model(1, 2).chart)
    assert not deprolongable(cartan_distribution(MongeEquation.model(1, 2)), p)
    assert deprolongable(cartan_distribution(MongeEquation.from_text(1, 2, "z2")), p)


def test_prolong_distribution_and_second_prolongation():
    hc = cartan_distribution(MongeEquation.model(1, 2))
    p1 = prolong_distribution(hc)
    assert len(p1.chart) == 6 and p1.chart[-1] == "t"
    flag = derived_flag(p1, generic_point(p1.chart))
    assert flag.growth == [2, 1, 1, 1, 1]
    assert deprolongable(p1, generic_point(p1.chart))
    carnot = carnot_model(p1)
    assert grade_profile(carnot.algebra).dims == (2, 1, 1, 1, 1)

    p2 = prolong_distribution(p1)
    assert p2.chart[-1] == "t1"
    flag2 = derived_flag(p2, generic_point(p2.chart))
    assert flag2.growth == [2, 1, 1, 1, 1, 1]
    carnot2 = carnot_model(p2)
    from mongelie.tanaka import prolong as tprolong

    r = tprolong(carnot2.algebra, cap=6)
    assert not r.is_finite  # the second prolongation is of contact type


def test_prolong_plane_translations():
    chart = ("x", "y")
    d = Distribution(chart, [VectorField.coordinate(chart, "x"),
                             VectorField.coordinate(chart, "y")])
    pro = prolong_distribution(d)
    flag = derived_flag(pro, generic_point(pro.chart))
    assert flag.growth == [2, 1]


def test_darboux_triples():
    triples, count = darboux_triples()
    assert count == 53
    assert (3, 3, 1) in triples
    assert (2, 2, 4) not in triples
    assert (1, 1, 6) in triples
    # normalization: (2,1,0) violates m1 <= m2 at k = 0
    assert (2, 1, 0) not in triples and (1, 2, 0) in triples


def test_equation_validation():
    with pytest.raises(InputError):
        MongeEquation.model(2, 1)


def test_rational_F_pole_allowed_in_construction_rejected_at_point():
    from mongelie.geometry import monge_chart
    from mongelie.symbolic.poly import Polynomial, RatFun

    chart = monge_chart(1, 2)
    z2 = Polynomial.var(chart, "z2")
    x = Polynomial.var(chart, "x")
    eq = MongeEquation(1, 2, RatFun(z2 * z2, x))  # pole along x = 0 is fine
    d = cartan_distribution(eq)
    pt = generic_point(chart)
    pt["x"] = Q(0)
    with pytest.raises(ZeroDivisionError):
        derived_flag(d, pt)
    # away from the pole the flag computes normally
    assert derived_flag(d, generic_point(chart)).growth[0] == 2
