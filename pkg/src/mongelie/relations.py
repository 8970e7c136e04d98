"""Canonical generator relations for the graded symmetry algebras of the
flat Monge models, used to locate named elements inside a computed
prolongation and to cross-check its bracket structure.

The relation sets declare named unknowns (elements of non-negative graded
components) together with all of their brackets against the base basis; a
prolongation satisfies the set when the resulting linear system is
consistent.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import InputError
from .tanaka import Relation, RelationSet

Q = Fraction


def _rel(left, right, *rhs):
    return Relation(left, right, tuple((Q(c), name) for c, name in rhs))


def _g0_relations(name, a, b, c, m, n):
    """Brackets of a degree-0 derivation acting with matrix [[a,b],[0,c]]
    on (e1, e1p) against the whole base of f(m, n)."""
    rels = [
        _rel(name, "e1", (a, "e1"), *(((b, "e1p"),) if b else ())),
        _rel(name, "e1p", *(((c, "e1p"),) if c else ())),
    ]
    for k in range(2, n + 2):
        rhs = []
        coeff = (k - 1) * a + c
        if coeff:
            rhs.append((coeff, f"e{k}"))
        if b and 3 <= k <= m + 2:
            if (k - 2) * b:
                rhs.append(((k - 2) * b, f"e{k}p"))
        rels.append(_rel(name, f"e{k}", *rhs))
    for k in range(3, m + 3):
        coeff = (k - 2) * a + 2 * c
        rels.append(_rel(name, f"e{k}p", *(((coeff, f"e{k}p"),) if coeff else ())))
    return rels


def graded_symmetry_relations(m: int, n: int) -> RelationSet:
    """The full non-negative-part relation set for the prolongation of
    f(m, n): degree-0 generators, plus the positive-degree chain when m < n.

    Regimes: m = n (two diagonal degree-0 generators, nothing positive),
    n > m > 1 (Borel degree-0 part, one generator per positive degree), and
    m = 1, n > 2 (two-dimensional degree-1 component).
    """
    if m < 1 or m > n:
        raise InputError("need 1 <= m <= n")
    if (m, n) == (1, 1):
        raise InputError("the (1,1) symbol has no finite relation table")

    unknowns = []
    rels = []
    if m == n:
        unknowns += [("t0_10", 0), ("t0_01", 0)]
        rels += _g0_relations("t0_10", 1, 0, 0, m, n)
        rels += _g0_relations("t0_01", 0, 0, 1, m, n)
        return RelationSet(tuple(unknowns), tuple(rels))

    unknowns += [("t0_100", 0), ("t0_010", 0), ("t0_001", 0)]
    rels += _g0_relations("t0_100", 1, 0, 0, m, n)
    rels += _g0_relations("t0_010", 0, 1, 0, m, n)
    rels += _g0_relations("t0_001", 0, 0, 1, m, n)

    if m > 1:
        # one generator per positive degree p = 1 .. n-m-1
        for p in range(1, n - m):
            name = f"t{p}_1"
            unknowns.append((name, p))
            prev = "t0_010" if p == 1 else f"t{p - 1}_1"
            rels.append(_rel(name, "e1", (1, prev)))
            rels.append(_rel(name, "e1p"))
            for k in range(2, n + 2):
                if p + 3 <= k <= m + p + 2:
                    cf = comb(k - 2, p + 1)
                    rels.append(_rel(name, f"e{k}", *(((cf, f"e{k - p}p"),) if cf else ())))
                else:
                    rels.append(_rel(name, f"e{k}"))
            for k in range(3, m + 3):
                rels.append(_rel(name, f"e{k}p"))
        return RelationSet(tuple(unknowns), tuple(rels))

    # m = 1, n > 2: degree 1 is two-dimensional
    unknowns += [("t1_10", 1), ("t1_01", 1)]
    rels.append(_rel("t1_10", "e1", (1, "t0_010")))
    rels.append(_rel("t1_10", "e1p"))
    for k in range(2, n + 2):
        rels.append(_rel("t1_10", f"e{k}", *(((1, "e3p"),) if k == 4 else ())))
    rels.append(_rel("t1_10", "e3p"))

    rels.append(_rel("t1_01", "e1", (1, "t0_001"), (-2, "t0_100")))
    rels.append(_rel("t1_01", "e1p", (1 - n * n, "t0_010")))
    rels.append(_rel("t1_01", "e2", (n * n, "e1p")))
    for k in range(3, n + 2):
        cf = (k - 1) * (3 - k) + n * n - 1
        rels.append(_rel("t1_01", f"e{k}", *(((cf, f"e{k - 1}"),) if cf else ())))
    rels.append(_rel("t1_01", "e3p"))

    for p in range(2, n - 1):
        name = f"t{p}_1"
        unknowns.append((name, p))
        prev = "t1_10" if p == 2 else f"t{p - 1}_1"
        rels.append(_rel(name, "e1", (1, prev)))
        rels.append(_rel(name, "e1p"))
        for k in range(2, n + 2):
            rels.append(_rel(name, f"e{k}", *(((1, "e3p"),) if k == p + 3 else ())))
        rels.append(_rel(name, "e3p"))
    return RelationSet(tuple(unknowns), tuple(rels))


def flat_model_identification(m: int, n: int):
    """The identification of the model symmetry generators with elements of
    the prolongation of f(m, n), as {generator: ((coeff, name), ...)}.

    Names reference base basis elements or the unknowns produced by
    :func:`graded_symmetry_relations`; the assignment is weight-graded:
    w(S_k) = k-1, w(R) = 0, w(Y_i) = i-m-2, w(Z_j) = j-n-1.
    """
    if (m, n) in ((1, 1), (1, 2)):
        raise InputError("no identification for the exceptional pairs")
    half = Q(1, 2)
    ident = {"S0": ((Q(1), "e1"),)}
    if m == n:
        ident["S1"] = ((half, "t0_01"), (Q(-1), "t0_10"))
        ident["R"] = ((-half, "t0_01"),)
    else:
        ident["S1"] = ((half, "t0_001"), (Q(-1), "t0_100"))
        ident["R"] = ((-half, "t0_001"),)
        if m == 1:
            ident["S2"] = ((Q(-1), "t1_01"),)
    # the -2 on the Y/Z chains is forced: [S0, Z_n] = Z_{n-1} must match
    # [e1, -2 e1p] = -2 e2, and the factor propagates down both chains
    for i in range(m):
        ident[f"Y{i}"] = ((Q(-2), f"e{m + 2 - i}p"),)
    for j in range(n):
        ident[f"Z{j}"] = ((Q(-2), f"e{n + 1 - j}"),)
    ident[f"Z{n}"] = ((Q(-2), "e1p"),)
    if n > m:
        ident[f"Z{n + 1}"] = ((Q(2), "t0_010"),)
        for k in range(1, n - m):
            name = "t1_10" if (m == 1 and k == 1) else f"t{k}_1"
            ident[f"Z{n + k + 1}"] = ((Q(2 * (-1) ** k), name),)
    return ident
