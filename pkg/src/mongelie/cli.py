"""Command-line front end.

The CLI is a thin client over the service: each command builds the same
request model the HTTP API accepts and dispatches it either in-process
(default) or to a running server via --url.  Exit codes: 0 success,
1 invalid input, 2 verification/claim failure, 3 cap reached.
"""

from __future__ import annotations

import json
import sys

import click
from fastapi import HTTPException
from pydantic import ValidationError

from .errors import InputError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CLAIM = 2
EXIT_CAP = 3


def _dispatch(ctx, endpoint, handler, request):
    """Call the service handler in-process, or POST to --url when given."""
    url = ctx.obj.get("url")
    if url:
        import httpx

        resp = httpx.post(
            url.rstrip("/") + endpoint,
            json=request.model_dump(mode="json", exclude_none=True, by_alias=True),
            timeout=600.0,
        )
        if resp.status_code == 422:
            raise InputError(resp.text)
        resp.raise_for_status()
        return resp.json()
    try:
        out = handler(request)
    except HTTPException as exc:
        if exc.status_code == 422:
            raise InputError(str(exc.detail)) from exc
        raise
    if hasattr(out, "model_dump"):
        return out.model_dump(mode="json", exclude_none=True)
    return out


def _emit(ctx, payload, table_fn=None):
    if ctx.obj.get("format") == "json" or table_fn is None:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        table_fn(payload)


def _algebra_ref(selector: str):
    from .service import models as M

    selector = selector.strip()
    if selector.startswith("@"):
        with open(selector[1:]) as fh:
            data = json.load(fh)
        return M.AlgebraRef(gnla=M.GnlaModel(**data))
    if selector.startswith("f:"):
        try:
            m, n = selector[2:].split(",")
            return M.AlgebraRef(m=int(m), n=int(n))
        except ValueError as exc:
            raise InputError(f"bad algebra selector {selector!r}; use f:m,n") from exc
    return M.AlgebraRef(name=selector)


@click.group()
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table",
              help="Output format.")
@click.option("--url", default=None, help="Dispatch to a running service instead of in-process.")
@click.pass_context
def cli(ctx, fmt, url):
    """Exact computations for rank-2 distributions of Monge equations."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ctx.obj["url"] = url


# ----- gnla ---------------------------------------------------------------

@cli.group()
def gnla():
    """Build, validate and export graded nilpotent Lie algebras."""


@gnla.command("make")
@click.option("--m", "m", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.pass_context
def gnla_make(ctx, m, n):
    from .service import models as M
    from .service.app import gnla_make as handler

    _emit(ctx, _dispatch(ctx, "/gnla/make", handler, M.MakeFmnRequest(m=m, n=n)))


@gnla.command("catalog")
@click.argument("name")
@click.pass_context
def gnla_catalog(ctx, name):
    from .service import models as M
    from .service.app import gnla_catalog as handler

    _emit(ctx, _dispatch(ctx, "/gnla/catalog", handler, M.CatalogRequest(name=name)))


@gnla.command("check")
@click.argument("path")
@click.pass_context
def gnla_check(ctx, path):
    from .service import models as M
    from .service.app import gnla_check as handler

    with open(path) as fh:
        data = json.load(fh)
    out = _dispatch(ctx, "/gnla/check", handler, M.CheckRequest(gnla=M.GnlaModel(**data)))

    def table(payload):
        for key in ("gradingOk", "jacobiOk", "fundamental", "nilpotent", "pureNegative"):
            click.echo(f"{key}: {payload[key]}")
        for v in payload["violations"]:
            click.echo(f"  violation: {v}")

    _emit(ctx, out, table)
    if not (out["gradingOk"] and out["jacobiOk"] and out["pureNegative"]):
        sys.exit(EXIT_CLAIM)


# ----- tanaka ---------------------------------------------------------------

@cli.group()
def tanaka():
    """Tanaka prolongation of fundamental graded algebras."""


@tanaka.command("prolong")
@click.option("--algebra", required=True, help="f:m,n | catalog name | @file.json")
@click.option("--cap", type=int, default=None)
@click.option("--brackets/--no-brackets", default=False, help="Include the bracket table.")
@click.pass_context
def tanaka_prolong(ctx, algebra, cap, brackets):
    from .service import models as M
    from .service.app import tanaka_prolong as handler

    req = M.ProlongRequest(algebra=_algebra_ref(algebra), cap=cap, include_brackets=brackets)
    out = _dispatch(ctx, "/tanaka/prolong", handler, req)

    def table(payload):
        dims = ", ".join(f"{g}: {d}" for g, d in sorted(payload["gradedDims"].items(),
                                                        key=lambda kv: int(kv[0])))
        click.echo(f"status: {payload['status']}   h0: {payload['h0']}")
        if payload.get("dim") is not None:
            click.echo(f"dim: {payload['dim']}")
        click.echo(f"graded dims: {dims}")

    _emit(ctx, out, table)
    if out["status"] == "capped":
        sys.exit(EXIT_CAP)


@tanaka.command("grid")
@click.option("--mmax", type=int, default=4)
@click.option("--nmax", type=int, default=6)
@click.option("--jobs", type=int, default=1)
@click.pass_context
def tanaka_grid(ctx, mmax, nmax, jobs):
    from .service import models as M
    from .service.app import tanaka_grid as handler

    out = _dispatch(ctx, "/tanaka/grid", handler, M.GridRequest(mmax=mmax, nmax=nmax, jobs=jobs))

    def table(payload):
        for e in payload["entries"]:
            mark = "ok" if e["matches"] else "MISMATCH"
            click.echo(f"({e['m']},{e['n']})  dim {e['dim']}  expected {e['expected']}  {mark}")
        click.echo(f"all match: {payload['all_match']}")

    _emit(ctx, out, table)
    if not out["all_match"]:
        sys.exit(EXIT_CLAIM)


# ----- cohomology -----------------------------------------------------------

@cli.command("cohomology")
@click.option("--algebra", required=True)
@click.pass_context
def cohomology_cmd(ctx, algebra):
    """Graded second cohomology with trivial coefficients."""
    from .service import models as M
    from .service.app import cohomology_h2 as handler

    out = _dispatch(ctx, "/cohomology/h2", handler,
                    M.CohomologyRequest(algebra=_algebra_ref(algebra)))

    def table(payload):
        for k, rec in sorted(payload["byGrading"].items(), key=lambda kv: int(kv[0])):
            click.echo(f"grading {k}: Z={rec['Z']} B={rec['B']} H={rec['H']}")
            for rep in rec["reps"]:
                click.echo("   rep: " + " + ".join(f"({c})*{w}" for w, c in rep))
        click.echo(f"total H^2: {payload['total']}")

    _emit(ctx, out, table)


# ----- ext -------------------------------------------------------------------

@cli.group()
def ext():
    """Central extensions: classification, towers, ODE realization."""


@ext.command("classify")
@click.option("--algebra", required=True)
@click.option("--grading", type=int, required=True)
@click.pass_context
def ext_classify(ctx, algebra, grading):
    from .service import models as M
    from .service.app import ext_classify as handler

    out = _dispatch(ctx, "/ext/classify", handler,
                    M.ClassifyRequest(algebra=_algebra_ref(algebra), grading=grading))

    def table(payload):
        click.echo(f"{len(payload['classes'])} classes at grading {payload['grading']}")
        for c in payload["classes"]:
            co = " + ".join(f"({q})*{w}" for w, q in c["cocycle"])
            click.echo(
                f"  [{co}]  orbit {c['orbitTangentDim']}"
                + ("  fixed" if c["fixedLine"] else "")
                + (f"  -> {c['catalogMatch']}" if c.get("catalogMatch") else "")
                + ("  UNSEPARATED" if c.get("unseparated") else "")
            )

    _emit(ctx, out, table)


@ext.command("realize")
@click.option("--model", "model", required=True, help="m,n of the base flat model")
@click.option("--class", "klass", default=None, help="p | hyp | ell")
@click.option("--cocycle", default=None, help='JSON [["w3^w1","1"], ...]')
@click.option("--grading", type=int, default=None)
@click.pass_context
def ext_realize(ctx, model, klass, cocycle, grading):
    from .service import models as M
    from .service.app import ext_realize as handler

    try:
        m, n = (int(x) for x in model.split(","))
    except ValueError as exc:
        raise InputError("--model expects m,n") from exc
    req = M.RealizeRequest(
        m=m, n=n, klass=klass, cocycle=json.loads(cocycle) if cocycle else None,
        grading=grading,
    )
    out = _dispatch(ctx, "/ext/realize", handler, req)

    def table(payload):
        for line in payload["system"]:
            click.echo(line)
        click.echo(f"fingerprint match: {payload['fingerprintMatch']}")

    _emit(ctx, out, table)


@ext.command("tower")
@click.option("--nmax", type=int, default=12)
@click.pass_context
def ext_tower(ctx, nmax):
    from .service import models as M
    from .service.app import ext_tower as handler

    out = _dispatch(ctx, "/ext/tower", handler, M.TowerRequest(nmax=nmax))

    def table(payload):
        for row in payload["rows"]:
            exts = ", ".join(f"{e['label']} (dim {e['tanakaDim']})" for e in row["extensions"])
            click.echo(f"n={row['n']}: cocycle dim {row['z2dim']}; {exts}")

    _emit(ctx, out, table)


# ----- monge ------------------------------------------------------------------

@cli.group()
def monge():
    """Jet-space geometry of Monge equations."""


def _monge_request(m, n, f, point):
    from .service import models as M

    pt = json.loads(point) if point else None
    return M.MongeRequest(m=m, n=n, F=f, point=pt)


@monge.command("growth")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--F", "f", default=None, help="F as an expression; default (z^(n))^2")
@click.option("--point", default=None, help='JSON point {"x":"1",...}')
@click.pass_context
def monge_growth(ctx, m, n, f, point):
    from .service.app import monge_growth as handler

    out = _dispatch(ctx, "/monge/growth", handler, _monge_request(m, n, f, point))

    def table(payload):
        click.echo(f"growth: {payload['growth']}  (mode {payload['mode']})")
        click.echo(f"ranks: {payload['ranks']}  full rank: {payload['fullRank']}")

    _emit(ctx, out, table)


@monge.command("carnot")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--F", "f", default=None)
@click.option("--point", default=None)
@click.pass_context
def monge_carnot(ctx, m, n, f, point):
    from .service.app import monge_carnot as handler

    out = _dispatch(ctx, "/monge/carnot", handler, _monge_request(m, n, f, point))

    def table(payload):
        click.echo(f"profile: {payload['profile']}")
        click.echo(f"catalog match: {payload['catalogMatch']}")

    _emit(ctx, out, table)


@monge.command("symmetries")
@click.option("--m", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.pass_context
def monge_symmetries(ctx, m, n):
    from .service import models as M
    from .service.app import monge_symmetries as handler

    out = _dispatch(ctx, "/monge/symmetries", handler, M.SymmetryRequest(m=m, n=n))

    def table(payload):
        click.echo(f"generators ({payload['count']}, expected {payload['expected']}): "
                   + " ".join(payload["generators"]))
        click.echo(f"all pass: {payload['allPass']}  table matches: {payload['tableMatches']}  "
                   f"identification: {payload['identificationOk']}")

    _emit(ctx, out, table)
    if not (out["allPass"] and out["tableMatches"] and out["identificationOk"]
            and out["count"] == out["expected"]):
        sys.exit(EXIT_CLAIM)


# ----- darboux / reproduce ------------------------------------------------------

@cli.group()
def darboux():
    """Admissible factor types for Darboux-integrable quotients."""


@darboux.command("triples")
@click.pass_context
def darboux_triples_cmd(ctx):
    from .service.app import darboux as handler

    out = handler(None).model_dump(mode="json")
    if ctx.obj.get("url"):
        import httpx

        out = httpx.post(ctx.obj["url"].rstrip("/") + "/darboux/triples", json={},
                         timeout=600.0).json()

    def table(payload):
        click.echo(f"count: {payload['count']}")

    _emit(ctx, out, table)


@cli.command("reproduce")
@click.option("--filter", "name_filter", default=None, help="Substring filter on claim names.")
@click.pass_context
def reproduce_cmd(ctx, name_filter):
    """Run the full claim-reproduction suite."""
    from .service import models as M
    from .service.app import reproduce as handler

    out = _dispatch(ctx, "/reproduce", handler, M.ReproduceRequest(filter=name_filter))

    def table(payload):
        for row in payload["results"]:
            mark = "PASS" if row["ok"] else "FAIL"
            click.echo(f"{mark}  {row['claim']}: {row['detail']}")

    _emit(ctx, out, table)
    if not out["allOk"]:
        sys.exit(EXIT_CLAIM)


@cli.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("mongelie.service.app:app", host=host, port=port)


def main():
    try:
        cli(standalone_mode=False)
    except (InputError, ValidationError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(EXIT_INPUT)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_INPUT)
    except SystemExit:
        raise
    except HTTPException as exc:
        click.echo(f"input error: {exc.detail}", err=True)
        sys.exit(EXIT_INPUT)
    except FileNotFoundError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


if __name__ == "__main__":
    main()
