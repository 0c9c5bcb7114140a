"""HTTP service exposing certification, queries, sampling, and export.

The CLI talks to this app in-process by default; run it under uvicorn to
serve it over the network.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import FamilyError, HistQError, ScenarioFileError
from ..events import ExprParseError
from ..families import Family, validate_family
from ..sampler import sample
from ..scenario_io import export_scenario, load_scenario
from ..scenarios import BUILTIN_BUILDERS, Scenario, get_builtin
from .schemas import (
    CertifyRequest,
    CertifyResponse,
    ExportResponse,
    QueryRequest,
    QueryResponse,
    SampleRequest,
    SampleResponse,
    ScenarioInfo,
    ScenarioRef,
)


def _resolve_scenario(ref: ScenarioRef) -> Scenario:
    if ref.document:
        try:
            scenario, _ = load_scenario(ref.document)
        except ScenarioFileError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return scenario
    if not ref.scenario:
        raise HTTPException(
            status_code=400, detail="request needs a scenario name or a document")
    try:
        return get_builtin(ref.scenario)
    except HistQError as exc:
        raise HTTPException(status_code=404, detail=str(exc))


def _resolve_family(scenario: Scenario, label: str) -> Family:
    if label not in scenario.named_families:
        raise HTTPException(
            status_code=404,
            detail=f"no family {label!r} in scenario {scenario.name}; "
                   f"available: {sorted(scenario.named_families)}")
    return scenario.named_families[label]


def create_app() -> FastAPI:
    app = FastAPI(
        title="histq",
        description="Inference over consistent families of quantum histories.",
    )

    @app.get("/scenarios", response_model=list[ScenarioInfo])
    def list_scenarios():
        out = []
        for name in sorted(BUILTIN_BUILDERS):
            sc = get_builtin(name)
            out.append(ScenarioInfo(
                name=name,
                description=sc.description,
                families=sorted(sc.named_families),
                projectors=sorted(sc.named_projectors),
                times=list(sc.dynamics.times),
                dim=sc.dynamics.space.dim,
            ))
        return out

    @app.post("/certify", response_model=CertifyResponse, response_model_exclude_none=True)
    def certify(req: CertifyRequest):
        scenario = _resolve_scenario(req)
        fam = _resolve_family(scenario, req.family)
        try:
            fam = validate_family(
                fam.elementary, condition=req.condition,
                eps_c=req.tolerance, name=fam.name)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except FamilyError as exc:
            return CertifyResponse(
                verdict="inconsistent",
                family=req.family,
                condition=req.condition,
                reason=type(exc).__name__,
                detail={"message": str(exc), **getattr(exc, "detail", {})},
            )
        return CertifyResponse(**fam.to_report())

    @app.post("/query", response_model=QueryResponse, response_model_exclude_none=True)
    def query(req: QueryRequest):
        scenario = _resolve_scenario(req)
        _resolve_family(scenario, req.family)
        try:
            result = scenario.query(
                req.family, req.target, data=req.data, condition=req.condition)
        except ExprParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (FamilyError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return QueryResponse(**result.to_dict())

    @app.post("/sample", response_model=SampleResponse)
    def run_sample(req: SampleRequest):
        scenario = _resolve_scenario(req)
        _resolve_family(scenario, req.family)
        try:
            fam = scenario.family(req.family, req.condition)
        except (FamilyError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if req.n_runs < 1:
            raise HTTPException(status_code=400, detail="n_runs must be >= 1")
        report = sample(fam, req.n_runs, req.seed)
        return SampleResponse(
            labels=[" . ".join(h.labels()) for h in fam.elementary],
            **report.to_dict(),
        )

    @app.post("/export", response_model=ExportResponse)
    def export(req: ScenarioRef):
        scenario = _resolve_scenario(req)
        return ExportResponse(name=scenario.name, document=export_scenario(scenario))

    return app


app = create_app()
