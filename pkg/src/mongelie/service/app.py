"""FastAPI service wrapping the computation core.

Every endpoint is a pure function of its request body, so the service is
safe under concurrent clients; the heavy lifting happens in worker threads
via FastAPI's default threadpool for sync endpoints.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, HTTPException

from .. import jsonio
from ..cohomology import h2_graded
from ..errors import ComputationFailure, InputError
from ..extensions import (
    classify_pure_extensions,
    named_cocycle,
    parabolic_tower,
    realize_extension_ode,
)
from ..geometry import (
    MongeEquation,
    carnot_model,
    cartan_distribution,
    darboux_triples,
    derived_flag,
    generic_point,
)
from ..gnla import catalog, check_gnla, fingerprint, grade_profile, make_fmn
from ..reproduce import run_claims
from ..symmetries import (
    is_symmetry,
    l3plus_check,
    model_symmetries,
    model_symmetry_names,
    symmetry_commutator_table,
)
from ..tanaka import prolong, tanaka_dim
from . import models as M

app = FastAPI(
    title="mongelie",
    description="Exact computation service for Carnot algebras, Tanaka "
    "prolongations, graded Lie algebra cohomology, central extensions, and "
    "the geometry of Monge equations.",
    version="0.1.0",
)


def _resolve(ref: M.AlgebraRef):
    try:
        if ref.name is not None:
            return catalog(ref.name)
        if ref.gnla is not None:
            return jsonio.gnla_from_json(ref.gnla.model_dump(exclude_none=True))
        return make_fmn(ref.m, ref.n)
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _wrap(fn):
    try:
        return fn()
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except ComputationFailure as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/gnla/make", response_model=M.GnlaModel)
def gnla_make(req: M.MakeFmnRequest):
    return _wrap(lambda: jsonio.gnla_to_json(make_fmn(req.m, req.n)))


@app.post("/gnla/catalog", response_model=M.GnlaModel)
def gnla_catalog(req: M.CatalogRequest):
    return _wrap(lambda: jsonio.gnla_to_json(catalog(req.name)))


@app.post("/gnla/check", response_model=M.CheckResponse)
def gnla_check(req: M.CheckRequest):
    def go():
        algebra = jsonio.gnla_from_json(req.gnla.model_dump(exclude_none=True))
        return check_gnla(algebra).to_dict()

    return _wrap(go)


@app.post("/tanaka/prolong", response_model=M.ProlongResponse)
def tanaka_prolong(req: M.ProlongRequest):
    def go():
        algebra = _resolve(req.algebra)
        result = prolong(algebra, cap=req.cap)
        return jsonio.prolongation_to_json(result, include_brackets=req.include_brackets)

    return _wrap(go)


@app.post("/tanaka/grid", response_model=M.GridResponse)
def tanaka_grid(req: M.GridRequest):
    def go():
        pairs = [
            (m, n)
            for m in range(1, req.mmax + 1)
            for n in range(m, req.nmax + 1)
            if (m, n) not in ((1, 1), (1, 2)) and m <= n
        ]

        def job(mn):
            m, n = mn
            return tanaka_dim(make_fmn(m, n))

        jobs = max(1, req.jobs)
        if jobs == 1:
            dims = [job(mn) for mn in pairs]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                dims = list(pool.map(job, pairs))
        entries = []
        all_match = True
        for (m, n), dim in zip(pairs, dims):
            expected = 2 * n + 5 if m == 1 else 2 * n + 4
            matches = dim == expected
            all_match = all_match and matches
            entries.append(M.GridEntry(m=m, n=n, dim=dim, expected=expected, matches=matches))
        return M.GridResponse(entries=entries, all_match=all_match)

    return _wrap(go)


@app.post("/cohomology/h2", response_model=M.CohomologyResponse)
def cohomology_h2(req: M.CohomologyRequest):
    def go():
        algebra = _resolve(req.algebra)
        return jsonio.cohomology_to_json(h2_graded(algebra))

    return _wrap(go)


@app.post("/ext/classify", response_model=M.ClassifyResponse)
def ext_classify(req: M.ClassifyRequest):
    def go():
        algebra = _resolve(req.algebra)
        classes = classify_pure_extensions(algebra, req.grading)
        from ..cohomology import CochainSpace, CoeffModule

        c2 = CochainSpace(algebra, 2, CoeffModule.trivial(algebra), req.grading)
        wedge_basis = [b for b, _ in c2.basis]
        out = []
        for c in classes:
            out.append(
                M.ClassifiedClass(
                    cocycle=jsonio.cocycle_terms_to_json(algebra, wedge_basis, c.cocycle),
                    orbitTangentDim=c.orbit_tangent_dim,
                    fixedLine=c.fixed_line,
                    catalogMatch=c.catalog_match,
                    unseparated=c.unseparated,
                    fingerprint=jsonio.fingerprint_to_json(c.fingerprint),
                )
            )
        return M.ClassifyResponse(grading=req.grading, classes=out)

    return _wrap(go)


@app.post("/ext/realize", response_model=M.RealizeResponse)
def ext_realize(req: M.RealizeRequest):
    def go():
        if req.klass is not None:
            vec = named_cocycle(req.m, req.n, req.klass)
            grading = 4
        else:
            vec, grading = _cocycle_from_terms(req.m, req.n, req.cocycle)
        realized = realize_extension_ode(req.m, req.n, [vec],
                                         grading=req.grading or grading)
        return jsonio.realized_to_json(realized)

    return _wrap(go)


def _cocycle_from_terms(m, n, terms):
    from fractions import Fraction

    from ..cohomology import CochainSpace, CoeffModule

    algebra = make_fmn(m, n)
    c2 = None
    # terms use the descending "wi^wj" orientation; find the grading by names
    pairs = []
    for label, coeff in terms:
        hi, lo = label.split("^")
        i = algebra.index("e" + hi[1:])
        j = algebra.index("e" + lo[1:])
        pairs.append(((i, j), jsonio.q_from_str(coeff)))
    grading = -(algebra.grades[pairs[0][0][0]] + algebra.grades[pairs[0][0][1]])
    c2 = CochainSpace(algebra, 2, CoeffModule.trivial(algebra), grading)
    wedge_basis = [b for b, _ in c2.basis]
    vec = [Fraction(0)] * len(wedge_basis)
    for (i, j), coeff in pairs:
        if i < j:
            vec[wedge_basis.index((i, j))] -= coeff
        else:
            vec[wedge_basis.index((j, i))] += coeff
    return vec, grading


@app.post("/ext/tower", response_model=M.TowerResponse)
def ext_tower(req: M.TowerRequest):
    def go():
        rows = []
        for row in parabolic_tower(req.nmax):
            rows.append(
                M.TowerRowModel(
                    n=row.n,
                    z2dim=row.z2_dim,
                    extensions=[
                        {"label": label, "tanakaDim": str(dim)}
                        for label, _, dim in row.extensions
                    ],
                    pprimeH2Top=row.pprime_h2_top,
                )
            )
        return M.TowerResponse(rows=rows)

    return _wrap(go)


def _equation_from(req: M.MongeRequest) -> MongeEquation:
    if req.F is None:
        return MongeEquation.model(req.m, req.n)
    return MongeEquation.from_text(req.m, req.n, req.F)


def _point_from(req, chart):
    if req.point is None:
        return generic_point(chart)
    return {k: jsonio.q_from_str(v) for k, v in req.point.items()}


@app.post("/monge/growth", response_model=M.FlagResponse)
def monge_growth(req: M.MongeRequest):
    def go():
        eq = _equation_from(req)
        flag = derived_flag(cartan_distribution(eq), _point_from(req, eq.chart))
        return jsonio.flag_to_json(flag)

    return _wrap(go)


@app.post("/monge/carnot", response_model=M.CarnotResponse)
def monge_carnot(req: M.MongeRequest):
    def go():
        eq = _equation_from(req)
        dist = cartan_distribution(eq)
        if req.point is None:
            carnot = carnot_model(dist)
        else:
            from ..geometry import carnot_at_point

            carnot = carnot_at_point(dist, _point_from(req, eq.chart))
        fp = fingerprint(carnot.algebra)
        match = None
        if fp == fingerprint(make_fmn(req.m, req.n)):
            match = f"f({req.m},{req.n})"
        return M.CarnotResponse(
            algebra=M.GnlaModel(**jsonio.gnla_to_json(carnot.algebra)),
            profile=list(grade_profile(carnot.algebra).dims),
            fingerprint=jsonio.fingerprint_to_json(fp),
            catalogMatch=match,
        )

    return _wrap(go)


@app.post("/monge/symmetries", response_model=M.SymmetryResponse)
def monge_symmetries(req: M.SymmetryRequest):
    def go():
        eq = MongeEquation.model(req.m, req.n)
        fields = model_symmetries(req.m, req.n)
        names = model_symmetry_names(req.m, req.n)
        expected = 2 * req.n + 5 if req.m == 1 else 2 * req.n + 4
        all_pass = all(is_symmetry(eq, f) for f in fields.values())
        table = symmetry_commutator_table(req.m, req.n, fields)
        ident = l3plus_check(req.m, req.n)
        return M.SymmetryResponse(
            count=len(fields),
            expected=expected,
            allPass=all_pass,
            tableMatches=table.matches_expected,
            identificationOk=ident,
            generators=names,
        )

    return _wrap(go)


@app.post("/darboux/triples", response_model=M.DarbouxResponse)
def darboux(_: dict = None):
    triples, count = darboux_triples()
    return M.DarbouxResponse(count=count, triples=[list(t) for t in triples])


@app.post("/reproduce", response_model=M.ReproduceResponse)
def reproduce(req: M.ReproduceRequest):
    rows = run_claims(req.filter)
    return M.ReproduceResponse(
        results=[M.ClaimRow(**row) for row in rows],
        allOk=all(row["ok"] for row in rows),
    )
