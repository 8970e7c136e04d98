"""JSON interchange formats.

Rationals serialize as "p/q" strings (plain "p" when q = 1).  Primed basis
names already carry the "p" suffix internally, so they pass through.  Wedge
monomials print in descending orientation ("w3^w1"), which flips the sign of
the internally ascending-index storage.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .gnla import GradedAlgebra


def q_to_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def q_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational literal {s!r}") from exc


def gnla_to_json(algebra: GradedAlgebra) -> dict:
    basis = [{"name": n, "grade": g} for n, g in zip(algebra.names, algebra.grades)]
    brackets = []
    for (i, j) in sorted(algebra.brackets):
        vec = algebra.brackets[(i, j)]
        brackets.append(
            {
                "left": algebra.names[i],
                "right": algebra.names[j],
                "value": [
                    {"b": algebra.names[k], "c": q_to_str(c)}
                    for k, c in sorted(vec.items())
                ],
            }
        )
    out = {"basis": basis, "brackets": brackets}
    if algebra.tag:
        out["tag"] = algebra.tag
    return out


def gnla_from_json(data: dict) -> GradedAlgebra:
    try:
        basis = [(b["name"], int(b["grade"])) for b in data["basis"]]
    except (KeyError, TypeError) as exc:
        raise InputError("malformed basis") from exc
    index = {name: i for i, (name, _) in enumerate(basis)}
    brackets = {}
    for item in data.get("brackets", []):
        try:
            li = index[item["left"]]
            ri = index[item["right"]]
            vec = {index[t["b"]]: q_from_str(t["c"]) for t in item["value"]}
        except KeyError as exc:
            raise InputError(f"bracket references unknown name: {exc}") from exc
        if li == ri:
            raise InputError("bracket of an element with itself")
        if li < ri:
            brackets[(li, ri)] = vec
        else:
            brackets[(ri, li)] = {k: -c for k, c in vec.items()}
    return GradedAlgebra(basis, brackets, tag=data.get("tag"), validate_grading=False)


def _dual_label(name: str) -> str:
    # e3p -> w3p; names outside the e-convention keep their full spelling
    return "w" + (name[1:] if name.startswith("e") and len(name) > 1 else name)


def wedge_name(algebra: GradedAlgebra, i: int, j: int) -> str:
    """Descending-orientation label of the dual wedge pair (i < j)."""
    return f"{_dual_label(algebra.names[j])}^{_dual_label(algebra.names[i])}"


def cocycle_terms_to_json(algebra, wedge_basis, vector):
    """[(label, coeff-string)] for a cocycle vector, descending orientation,
    scaled so the first printed coefficient is positive."""
    out = []
    for (i, j), c in zip(wedge_basis, vector):
        if c:
            out.append([wedge_name(algebra, i, j), -c])
    if out and out[0][1] < 0:
        out = [[w, -c] for w, c in out]
    return [[w, q_to_str(c)] for w, c in out]


def cohomology_to_json(report) -> dict:
    by = {}
    for k, rec in sorted(report.by_grading.items()):
        by[str(k)] = {
            "Z": rec.z,
            "B": rec.b,
            "H": rec.h,
            "reps": [
                cocycle_terms_to_json(report.algebra, rec.basis, rep) for rep in rec.reps
            ],
        }
    return {"byGrading": by, "total": report.total}


def prolongation_to_json(result, include_brackets=True) -> dict:
    out = {
        "gradedDims": {str(g): d for g, d in result.graded_dims().items()},
        "status": result.status,
        "h0": result.h0dim,
    }
    if result.is_finite:
        out["dim"] = result.total_dim
        out["topGrade"] = result.top_grade
    else:
        out["cap"] = result.top_grade
    if include_brackets:
        out["brackets"] = gnla_to_json(result.algebra())
    return out


def flag_to_json(flag) -> dict:
    return {
        "mode": flag.mode,
        "growth": list(flag.growth),
        "ranks": list(flag.ranks),
        "stabilized": flag.stabilized,
        "fullRank": flag.full_rank,
        "point": {k: q_to_str(v) for k, v in flag.point.items()},
    }


def monge_to_json(eq) -> dict:
    return {"m": eq.m, "n": eq.n, "F": str(eq.F)}


def fingerprint_to_json(fp) -> dict:
    profile, h2, tdim, h0, lines = fp
    return {
        "profile": list(profile),
        "h2": [[k, h] for k, h in h2],
        "tanakaDim": tdim,
        "h0": h0,
        "nilpotencyLines": None if lines is None else list(lines),
    }


def realized_to_json(realized) -> dict:
    return {
        "system": list(realized.system),
        "beta": [str(b) for b in realized.betas],
        "grading": realized.grading,
        "fingerprintMatch": realized.fingerprint_match,
    }
