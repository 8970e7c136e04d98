from fractions import Fraction

import pytest

from mongelie.errors import InputError
from mongelie.gnla import GradedAlgebra, catalog, make_fmn
from mongelie.relations import graded_symmetry_relations
from mongelie.tanaka import (
    Relation,
    RelationSet,
    compute_g0,
    compute_h0,
    prolong,
    tanaka_dim,
    verify_structure_relations,
)

Q = Fraction


def test_g0_dimensions():
    assert len(compute_g0(make_fmn(2, 2))) == 2
    assert len(compute_g0(make_fmn(2, 3))) == 3
    assert len(compute_g0(catalog("heis3"))) == 4


def test_g0_rejects_non_fundamental():
    abelian = GradedAlgebra([("a", -1), ("b", -2)], {})
    with pytest.raises(InputError):
        compute_g0(abelian)


def test_h0_values():
    for m, n in [(1, 3), (2, 2), (2, 4), (3, 5), (1, 6)]:
        assert compute_h0(make_fmn(m, n)).dim == 0
    assert compute_h0(catalog("heis3")).dim == 3
    assert compute_h0(catalog("goursat(4)")).dim == 1


def test_prolong_g2_case():
    r = prolong(make_fmn(1, 2))
    assert r.is_finite and r.total_dim == 14
    dims = r.graded_dims()
    assert [dims[g] for g in range(-3, 4)] == [2, 1, 2, 4, 2, 1, 2]


def test_prolong_equal_orders():
    r = prolong(make_fmn(2, 2))
    assert r.is_finite and r.total_dim == 8
    dims = r.graded_dims()
    assert [dims[g] for g in range(-4, 1)] == [1, 2, 1, 2, 2]


def test_prolong_contact_growth():
    r = prolong(catalog("heis3"), cap=8)
    assert not r.is_finite
    assert r.nonneg_dims() == [4, 6, 9, 12, 16, 20, 25, 30, 36]


def test_prolong_regraded_exceptional_algebra():
    """The (1,1,1,1,2)-graded quotient symbol of the prolonged 5D model
    prolongs back to the same 14-dimensional algebra."""
    from mongelie.geometry import MongeEquation, carnot_model, cartan_distribution, prolong_distribution

    dist = prolong_distribution(cartan_distribution(MongeEquation.model(1, 2)))
    carnot = carnot_model(dist)
    r = prolong(carnot.algebra)
    assert r.is_finite and r.total_dim == 14
    dims = r.graded_dims()
    assert [dims.get(g, 0) for g in range(-5, 6)] == [1, 1, 1, 1, 2, 2, 2, 1, 1, 1, 1]


def test_tanaka_dim_formulas():
    assert tanaka_dim(make_fmn(3, 5)) == 14  # 2n+4
    assert tanaka_dim(make_fmn(1, 6)) == 17  # 2n+5
    assert tanaka_dim(catalog("pprime(7)")) == 9
    assert tanaka_dim(catalog("heis3")) == "capped"


def test_transitivity_of_components():
    """In every non-negative component the only element vanishing on the
    top-degree generators is zero."""
    for name in ["f(1,3)", "f(2,4)", "p(7)"]:
        r = prolong(catalog(name))
        for comp in r.components:
            for w in comp:
                blk = w.blocks.get(1)
                assert blk is not None
            # the g_{-1} blocks alone must be linearly independent
            rows = []
            for w in comp:
                row = []
                for vec in w.blocks.get(1, []):
                    row.extend(vec)
                rows.append(row)
            from mongelie.symbolic.linalg import rank_rows

            assert rank_rows(rows) == len(comp)


def test_finite_status_includes_zero_check():
    r = prolong(make_fmn(2, 3))
    # the component list ends with the explicitly computed empty component
    assert r.components[-1] == [] and len(r.components) == r.top_grade + 2


def test_bracket_table_jacobi_and_grading():
    for name in ["f(1,2)", "f(2,2)", "f(1,4)", "pprime(7)"]:
        r = prolong(catalog(name))
        assert r.verify_jacobi() == []


def test_capped_bracket_table_jacobi_sampled():
    r = prolong(catalog("heis3"), cap=4)
    assert r.verify_jacobi() == []


def test_structure_relations_all_regimes():
    for m, n in [(2, 2), (3, 3), (2, 3), (2, 4), (1, 3), (1, 4), (1, 5)]:
        r = prolong(make_fmn(m, n))
        ok, sol = verify_structure_relations(r, graded_symmetry_relations(m, n))
        assert ok, (m, n)
        assert sol


def test_structure_relations_wrong_regime_fails():
    r = prolong(make_fmn(2, 2))
    ok, sol = verify_structure_relations(r, graded_symmetry_relations(1, 2))
    assert not ok and sol is None


def test_structure_relations_inconsistent_custom():
    r = prolong(make_fmn(2, 2))
    rel = RelationSet(
        unknowns=(("u", 0),),
        relations=(Relation("u", "e1", ((Q(1), "e1p"),)),),
    )
    ok, _ = verify_structure_relations(r, rel)
    assert not ok


def test_g0_h1_cross_check():
    from mongelie.cohomology import CoeffModule, h1_module

    for name in ["f(1,2)", "f(2,3)", "h6", "ell6", "heis3", "pprime(7)"]:
        a = catalog(name)
        h1 = h1_module(a, CoeffModule.adjoint(a))
        assert h1.get(0, 0) == len(compute_g0(a)), name


def test_symmetry_dim_equals_prolongation_dim():
    from mongelie.symmetries import model_symmetries

    for m, n in [(2, 2), (1, 3), (2, 3)]:
        assert len(model_symmetries(m, n)) == tanaka_dim(make_fmn(m, n))
