import random
from fractions import Fraction

import pytest

from mongelie.errors import InputError
from mongelie.gnla import (
    CATALOG_SAMPLE,
    GradedAlgebra,
    catalog,
    check_gnla,
    check_homomorphism,
    fingerprint,
    grade_profile,
    make_fmn,
    nilpotency_line_counts,
    quotient_by_indices,
    quotient_top_grade,
)
from mongelie.jsonio import gnla_from_json, gnla_to_json
from mongelie.symbolic.linalg import invert_rows

Q = Fraction


def test_make_fmn_examples():
    a = make_fmn(1, 2)
    assert a.dim == 5
    nz = {(a.names[i], a.names[j]): {a.names[k]: c for k, c in v.items()}
          for (i, j), v in a.brackets.items()}
    assert nz == {
        ("e1", "e1p"): {"e2": 1},
        ("e1", "e2"): {"e3": 1},
        ("e1p", "e2"): {"e3p": 1},
    }
    b = make_fmn(2, 2)
    assert b.dim == 6 and grade_profile(b).dims == (2, 1, 2, 1)
    c = make_fmn(2, 3)
    assert c.dim == 7 and grade_profile(c).dims == (2, 1, 2, 2)


def test_make_fmn_dimension_and_profile_grid():
    for m in range(1, 9):
        for n in range(m, 9):
            if (m, n) == (1, 1):
                continue
            a = make_fmn(m, n)
            assert a.dim == m + n + 2
            if m < n:
                want = (2, 1) + (2,) * m + (1,) * (n - m - 1)
            else:
                want = (2, 1) + (2,) * (n - 1) + (1,)
            assert grade_profile(a).dims == want, (m, n)


def test_make_fmn_heisenberg_special_case():
    a = make_fmn(1, 1)
    assert a.dim == 3 and grade_profile(a).dims == (2, 1)


def test_make_fmn_input_errors():
    with pytest.raises(InputError):
        make_fmn(0, 1)
    with pytest.raises(InputError):
        make_fmn(3, 2)


def test_profile_examples():
    assert grade_profile(make_fmn(1, 3)).dims == (2, 1, 2, 1)
    assert grade_profile(make_fmn(1, 2)).dims == (2, 1, 2)
    assert grade_profile(make_fmn(2, 5)).dims == (2, 1, 2, 2, 1, 1)


def test_check_gnla_flags_grading_violation():
    bad = GradedAlgebra(
        [("e1", -1), ("e1p", -1), ("e3", -3)],
        {(0, 1): {2: Q(1)}},
        validate_grading=False,
    )
    rep = check_gnla(bad)
    assert not rep.grading_ok and not rep.ok


def test_check_gnla_abelian_not_fundamental():
    a = GradedAlgebra([("a", -1), ("b", -1), ("c", -2)], {})
    rep = check_gnla(a)
    assert rep.jacobi_ok and not rep.fundamental and rep.nilpotent


def test_every_catalog_entry_validates():
    for name in CATALOG_SAMPLE:
        a = catalog(name)
        rep = check_gnla(a)
        assert rep.ok and rep.fundamental and rep.nilpotent, (name, rep.violations)


def test_catalog_examples():
    ell = catalog("ell6")
    idx = ell.index
    assert ell.bracket_basis(idx("e1"), idx("e3")) == {idx("e4"): 1}
    assert ell.bracket_basis(idx("e1p"), idx("e3p")) == {idx("e4"): 1}
    e7 = catalog("ext7_211212")
    assert e7.bracket_basis(e7.index("e1p"), e7.index("e4")) == {e7.index("e5"): 1}
    assert e7.bracket_basis(e7.index("e3"), e7.index("e2")) == {e7.index("e5"): 1}
    pp = catalog("pprime(7)")
    assert pp.bracket_basis(pp.index("e1p"), pp.index("e4")) == {pp.index("e5"): 1}
    with pytest.raises(InputError):
        catalog("q(6)")


def test_homomorphism_identity_and_swap():
    a = make_fmn(1, 2)
    identity = [{i: Q(1)} for i in range(a.dim)]
    ok, _ = check_homomorphism(a, a, identity)
    assert ok
    b = make_fmn(1, 3)
    swap = [{i: Q(1)} for i in range(b.dim)]
    i1, i1p = b.index("e1"), b.index("e1p")
    swap[i1], swap[i1p] = {i1p: Q(1)}, {i1: Q(1)}
    ok, pair = check_homomorphism(b, b, swap)
    assert not ok and pair is not None


def test_fingerprint_separates_and_is_reflexive():
    fp_p = fingerprint(catalog("p(6)"))
    fp_h = fingerprint(catalog("h6"))
    fp_e = fingerprint(catalog("ell6"))
    assert fp_p[2] == 11 and fp_h[2] == 8
    assert len({fp_p, fp_h, fp_e}) == 3
    assert fingerprint(make_fmn(1, 2)) == fingerprint(make_fmn(1, 2))
    fp12 = fingerprint(make_fmn(1, 2))
    assert fp12[0] == (2, 1, 2) and fp12[1] == ((4, 3),) and fp12[2] == 14 and fp12[3] == 0


def test_nilpotency_line_counts():
    # exactly one ad^3-nilpotent line for the models, two for h6, none for ell6
    assert nilpotency_line_counts(make_fmn(1, 3))[1] == 1
    assert nilpotency_line_counts(catalog("h6"))[1] == 2
    assert nilpotency_line_counts(catalog("ell6"))[1] == 0


def random_graded_automorphism(rng, algebra):
    """A random grade-preserving change of basis as a dense matrix."""
    n = algebra.dim
    mat = [[Q(0)] * n for _ in range(n)]
    for g in set(algebra.grades):
        comp = algebra.component(g)
        while True:
            block = [[Q(rng.randint(-3, 3)) for _ in comp] for _ in comp]
            if invert_rows(block) is not None:
                break
        for bi, i in enumerate(comp):
            for bj, j in enumerate(comp):
                mat[i][j] = block[bi][bj]
    return mat


def transform_by(algebra, mat):
    inv = invert_rows(mat)
    assert inv is not None
    n = algebra.dim
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            u = {k: mat[k][i] for k in range(n) if mat[k][i]}
            v = {k: mat[k][j] for k in range(n) if mat[k][j]}
            w = algebra.bracket(u, v)
            vec = {}
            for k in range(n):
                s = sum((inv[k][t] * c for t, c in w.items()), Q(0))
                if s:
                    vec[k] = s
            if vec:
                brackets[(i, j)] = vec
    return GradedAlgebra(list(zip(algebra.names, algebra.grades)), brackets)


@pytest.mark.parametrize("name", ["p(6)", "h6", "ell6", "f(2,3)"])
def test_fingerprint_invariant_under_basis_change(name):
    rng = random.Random(hash(name) & 0xFFFF)
    a = catalog(name)
    fp = fingerprint(a)
    for _ in range(5):
        b = transform_by(a, random_graded_automorphism(rng, a))
        assert check_gnla(b).ok
        assert fingerprint(b) == fp


def test_quotients():
    a = make_fmn(2, 2)
    q = quotient_top_grade(a)
    assert grade_profile(q).dims == (2, 1, 2)
    assert fingerprint(q) == fingerprint(make_fmn(1, 2))
    with pytest.raises(InputError):
        quotient_by_indices(a, [a.index("e1")])  # not central


def test_fmn_is_chain_of_central_extensions_over_the_unprimed_quotient():
    # dropping the primed top m times lands on the unprimed chain algebra
    from mongelie.gnla import _heisenberg_chain

    for m, n in [(2, 3), (3, 4), (2, 2)]:
        a = make_fmn(m, n)
        cur = a
        for step in range(m):
            drop = [cur.index(f"e{m + 2 - step}p")]
            cur = quotient_by_indices(cur, drop)
        want = _heisenberg_chain(n)
        assert fingerprint(cur) == fingerprint(want), (m, n)


def test_json_roundtrip():
    for name in ["f(1,2)", "pprime(7)", "ext7_21222", "heis3"]:
        a = catalog(name)
        data = gnla_to_json(a)
        b = gnla_from_json(data)
        assert b.names == a.names and b.grades == a.grades and b.brackets == a.brackets
        assert data["basis"][0]["name"] == "e1"
    # primed names serialize with the "p" suffix
    data = gnla_to_json(make_fmn(1, 2))
    names = {b["name"] for b in data["basis"]}
    assert "e1p" in names and "e3p" in names
