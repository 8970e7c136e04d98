"""Pydantic request/response models for the compute service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class BracketTerm(BaseModel):
    b: str
    c: str


class GnlaBracket(BaseModel):
    left: str
    right: str
    value: list[BracketTerm]


class GnlaBasisElement(BaseModel):
    name: str
    grade: int


class GnlaModel(BaseModel):
    basis: list[GnlaBasisElement]
    brackets: list[GnlaBracket] = Field(default_factory=list)
    tag: Optional[str] = None


class AlgebraRef(BaseModel):
    """Exactly one of: a model pair (m, n), a catalog name, or inline data."""

    m: Optional[int] = None
    n: Optional[int] = None
    name: Optional[str] = None
    gnla: Optional[GnlaModel] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        ways = sum([(self.m is not None and self.n is not None), self.name is not None,
                    self.gnla is not None])
        if ways != 1:
            raise ValueError("specify exactly one of (m,n), name, or inline gnla")
        return self


class MakeFmnRequest(BaseModel):
    m: int
    n: int


class CatalogRequest(BaseModel):
    name: str


class CheckRequest(BaseModel):
    gnla: GnlaModel


class CheckResponse(BaseModel):
    gradingOk: bool
    jacobiOk: bool
    fundamental: bool
    nilpotent: bool
    pureNegative: bool
    violations: list[str]


class ProlongRequest(BaseModel):
    algebra: AlgebraRef
    cap: Optional[int] = None
    include_brackets: bool = True


class ProlongResponse(BaseModel):
    gradedDims: dict[str, int]
    status: str
    h0: int
    dim: Optional[int] = None
    topGrade: Optional[int] = None
    cap: Optional[int] = None
    brackets: Optional[GnlaModel] = None


class GridRequest(BaseModel):
    mmax: int = 4
    nmax: int = 6
    jobs: int = 1


class GridEntry(BaseModel):
    m: int
    n: int
    dim: int | str
    expected: int
    matches: bool


class GridResponse(BaseModel):
    entries: list[GridEntry]
    all_match: bool


class CohomologyRequest(BaseModel):
    algebra: AlgebraRef


class CohomologyResponse(BaseModel):
    byGrading: dict[str, dict]
    total: int


class ClassifyRequest(BaseModel):
    algebra: AlgebraRef
    grading: int


class ClassifiedClass(BaseModel):
    cocycle: list[list[str]]
    orbitTangentDim: int
    fixedLine: bool
    catalogMatch: Optional[str] = None
    unseparated: bool = False
    fingerprint: dict


class ClassifyResponse(BaseModel):
    grading: int
    classes: list[ClassifiedClass]


class RealizeRequest(BaseModel):
    m: int
    n: int
    klass: Optional[str] = Field(default=None, alias="class")
    cocycle: Optional[list[list[str]]] = None  # [label, coeff] pairs
    grading: Optional[int] = None

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def _one_source(self):
        if (self.klass is None) == (self.cocycle is None):
            raise ValueError("specify exactly one of class or cocycle")
        return self


class RealizeResponse(BaseModel):
    system: list[str]
    beta: list[str]
    grading: int
    fingerprintMatch: Optional[str]


class TowerRequest(BaseModel):
    nmax: int = 12


class TowerRowModel(BaseModel):
    n: int
    z2dim: int
    extensions: list[dict]
    pprimeH2Top: Optional[int] = None


class TowerResponse(BaseModel):
    rows: list[TowerRowModel]


class MongeRequest(BaseModel):
    m: int
    n: int
    F: Optional[str] = None  # defaults to the flat model
    point: Optional[dict[str, str]] = None


class FlagResponse(BaseModel):
    mode: str
    growth: list[int]
    ranks: list[int]
    stabilized: bool
    fullRank: bool
    point: dict[str, str]


class CarnotResponse(BaseModel):
    algebra: GnlaModel
    profile: list[int]
    fingerprint: dict
    catalogMatch: Optional[str] = None


class SymmetryRequest(BaseModel):
    m: int
    n: int


class SymmetryResponse(BaseModel):
    count: int
    expected: int
    allPass: bool
    tableMatches: bool
    identificationOk: bool
    generators: list[str]


class DarbouxResponse(BaseModel):
    count: int
    triples: list[list[int]]


class ReproduceRequest(BaseModel):
    filter: Optional[str] = None


class ClaimRow(BaseModel):
    claim: str
    ok: bool
    detail: str


class ReproduceResponse(BaseModel):
    results: list[ClaimRow]
    allOk: bool
