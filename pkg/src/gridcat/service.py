"""HTTP service exposing the table toolkit.

Every operation is stateless and pure, so the endpoints map one-to-one onto
the library calls: validate a table, construct one, extend one, simulate the
protocol, sweep a parameter grid, or search for a minimal table. Tables
travel in the same JSON shape as the table file format. Run with:

    uvicorn gridcat.service:app
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import construction, extension, protocol, search, tables
from .errors import (
    FieldSearchError,
    InvalidTableError,
    PointsNotFoundError,
    PreconditionError,
    SchemaError,
)

app = FastAPI(
    title="gridcat",
    description="Degree tables for private distributed matrix multiplication "
    "under the grid partition.",
    version="0.1.0",
)


class TableModel(BaseModel):
    """Wire form of a degree table; mirrors the table file format."""

    k: int
    m: int
    l: int
    t: int
    q: Optional[int] = None
    alpha_p: list[int]
    beta_p: list[int]
    alpha_s: list[int]
    beta_s: list[int]

    @classmethod
    def from_table(cls, table: tables.DegreeTable) -> "TableModel":
        return cls(**tables.save_table(table))

    def to_table(self) -> tables.DegreeTable:
        return tables.load_table(self.model_dump())


class ValidationModel(BaseModel):
    n: int
    ok: bool
    properties: dict[str, dict]

    @classmethod
    def from_report(cls, report: tables.ValidationReport) -> "ValidationModel":
        return cls(**report.to_doc())


class ConstructRequest(BaseModel):
    k: int
    m: int
    l: int
    t: int


class ConstructResponse(BaseModel):
    table: TableModel
    x: int
    z: int
    y: int
    q: int
    n: int
    bound: int
    valid: bool


class ExtendRequest(BaseModel):
    mode: Literal["dt-dt", "cat-cat", "dt-cat"]
    grid_m: int = Field(ge=1)
    table: TableModel


class ExtendResponse(BaseModel):
    table: TableModel
    n_prime: int
    n: int
    upper_bound: int
    lower_bound: int
    zeta: int
    within_bounds: bool
    source_valid: bool
    extended_valid: bool


class SimulateRequest(BaseModel):
    table: Optional[TableModel] = None
    scheme: Optional[Literal["construction1"]] = None
    k: Optional[int] = None
    m: Optional[int] = None
    l: Optional[int] = None
    t: Optional[int] = None
    block_size: int = Field(default=2, ge=1)
    seed: int = 0
    min_field: int = protocol.DEFAULT_MIN_FIELD
    audit: Literal["auto", "exhaustive", "sample"] = "auto"


class SimulateResponse(BaseModel):
    schema_version: int = Field(default=1, serialization_alias="schema")
    n: int
    p: int
    q: Optional[int]
    decode_ok: bool
    product_check: bool
    audit_checked: int
    audit_passed: int
    seed: int
    generator: str


class SweepSchemeModel(BaseModel):
    """construction1, or an extension of an inline OPP table."""

    name: str
    mode: Optional[Literal["dt-dt", "cat-cat", "dt-cat"]] = None
    table: Optional[TableModel] = None


class SweepRequest(BaseModel):
    k: tuple[int, int]
    m: tuple[int, int]
    l: tuple[int, int]
    t: tuple[int, int]
    schemes: list[SweepSchemeModel]


class SweepRowModel(BaseModel):
    k: int
    m: int
    l: int
    t: int
    scheme: str
    n: Optional[int]
    valid: bool
    bound: Optional[int]


class SweepResponse(BaseModel):
    rows: list[SweepRowModel]
    csv: str


class SearchRequest(BaseModel):
    k: int
    m: int
    l: int
    t: int
    max_exponent: int = Field(ge=0)
    q_candidates: Optional[list[int]] = None
    node_limit: int = Field(default=10**6, ge=1)


class SearchResponse(BaseModel):
    found: bool
    table: Optional[TableModel]
    n: Optional[int]
    complete: bool
    nodes: int


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/tables/validate", response_model=ValidationModel)
def validate_table(table: TableModel) -> ValidationModel:
    try:
        report = tables.validate(table.to_table())
    except SchemaError as exc:
        raise _bad_request(exc)
    return ValidationModel.from_report(report)


@app.post("/tables/construct", response_model=ConstructResponse)
def construct_table(req: ConstructRequest) -> ConstructResponse:
    try:
        params = construction.grid_cat_params(req.k, req.m, req.l, req.t)
        table = construction.build_grid_cat(req.k, req.m, req.l, req.t)
    except (PreconditionError, SchemaError) as exc:
        raise _bad_request(exc)
    report = tables.validate(table)
    return ConstructResponse(
        table=TableModel.from_table(table),
        x=params.x,
        z=params.z,
        y=params.y,
        q=params.q,
        n=report.n,
        bound=construction.theorem2_bound(params),
        valid=report.ok,
    )


@app.post("/tables/extend", response_model=ExtendResponse)
def extend_table(req: ExtendRequest) -> ExtendResponse:
    try:
        source = req.table.to_table()
        extended = extension.extend(source, req.grid_m, req.mode)
        bounds = extension.check_theorem1_bounds(source, extended, req.mode)
    except (PreconditionError, SchemaError) as exc:
        raise _bad_request(exc)
    return ExtendResponse(
        table=TableModel.from_table(extended),
        n_prime=bounds.n_prime,
        n=bounds.n,
        upper_bound=bounds.upper_bound,
        lower_bound=bounds.lower_bound,
        zeta=bounds.zeta,
        within_bounds=bounds.within_bounds,
        source_valid=tables.validate(source).ok,
        extended_valid=tables.validate(extended).ok,
    )


@app.post("/simulate", response_model=SimulateResponse)
def simulate(req: SimulateRequest) -> SimulateResponse:
    try:
        if req.table is not None:
            report = protocol.end_to_end(
                "table-file",
                table=req.table.to_table(),
                block_size=req.block_size,
                seed=req.seed,
                min_field=req.min_field,
                audit_policy=req.audit,
            )
        elif req.scheme == "construction1":
            report = protocol.end_to_end(
                "construction1",
                k=req.k,
                m=req.m,
                l=req.l,
                t=req.t,
                block_size=req.block_size,
                seed=req.seed,
                min_field=req.min_field,
                audit_policy=req.audit,
            )
        else:
            raise PreconditionError("provide either a table or scheme=construction1")
    except InvalidTableError as exc:
        raise HTTPException(status_code=422, detail=exc.report.to_doc())
    except (PreconditionError, SchemaError, PointsNotFoundError, FieldSearchError) as exc:
        raise _bad_request(exc)
    return SimulateResponse(
        n=report.n,
        p=report.field.p,
        q=report.field.q if report.field.q is not None and report.field.q > 1 else None,
        decode_ok=report.decode_ok,
        product_check=report.product_check,
        audit_checked=report.audit.checked,
        audit_passed=report.audit.passed,
        seed=report.seed,
        generator=report.generator,
    )


@app.post("/sweep", response_model=SweepResponse)
def run_sweep(req: SweepRequest) -> SweepResponse:
    specs: list[search.SchemeSpec] = []
    try:
        for s in req.schemes:
            if s.name == "construction1":
                specs.append(search.Construction1Scheme())
            elif s.mode is not None and s.table is not None:
                specs.append(
                    search.ExtensionScheme(mode=s.mode, table=s.table.to_table(), label=s.name)
                )
            else:
                raise PreconditionError(
                    f"scheme {s.name!r}: only construction1 or an extension of a "
                    "supplied OPP table is supported"
                )
        for lo, hi in (req.k, req.m, req.l, req.t):
            if lo < 1 or hi < lo:
                raise PreconditionError(f"malformed range {lo}..{hi}")
        rows = search.sweep(req.k, req.m, req.l, req.t, specs)
    except (PreconditionError, SchemaError) as exc:
        raise _bad_request(exc)
    return SweepResponse(
        rows=[SweepRowModel(**vars(r)) for r in rows],
        csv=search.sweep_to_csv(rows),
    )


@app.post("/search", response_model=SearchResponse)
def run_search(req: SearchRequest) -> SearchResponse:
    try:
        budget = search.SearchBudget(
            max_exponent=req.max_exponent,
            q_candidates=tuple(req.q_candidates) if req.q_candidates else None,
            node_limit=req.node_limit,
        )
        outcome = search.search_min_table(req.k, req.m, req.l, req.t, budget)
    except (PreconditionError, SchemaError, ValueError) as exc:
        raise _bad_request(exc)
    return SearchResponse(
        found=outcome.table is not None,
        table=TableModel.from_table(outcome.table) if outcome.table else None,
        n=outcome.n,
        complete=outcome.complete,
        nodes=outcome.nodes,
    )
