"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class ScenarioRef(BaseModel):
    """A scenario is named (built-in) or supplied inline as a document."""

    scenario: Optional[str] = None
    document: Optional[str] = Field(
        default=None, description="inline scenario document (YAML)")


class CertifyRequest(ScenarioRef):
    family: str
    condition: str = "medium"
    tolerance: float = 1e-9


class CertifyResponse(BaseModel):
    verdict: str
    family: Optional[str] = None
    condition: str
    times: List[str] = []
    histories: List[str] = []
    weights: List[float] = []
    max_re_residual: Optional[float] = None
    max_abs_residual: Optional[float] = None
    completeness_residual: Optional[float] = None
    re_residuals: List[List[float]] = []
    abs_residuals: List[List[float]] = []
    zero_weight: List[bool] = []
    reason: Optional[str] = None
    detail: Optional[dict] = None


class QueryRequest(ScenarioRef):
    family: str
    target: str
    data: Optional[str] = None
    condition: Optional[str] = None


class QueryResponse(BaseModel):
    kind: str  # "value" | "meaningless" | "undefined-conditional"
    value: Optional[float] = None
    reason: Optional[str] = None
    explanation: Optional[str] = None
    framework: Optional[str] = None


class SampleRequest(ScenarioRef):
    family: str
    n_runs: int = 100_000
    seed: int = 0
    condition: Optional[str] = None


class SampleResponse(BaseModel):
    family: Optional[str]
    n_runs: int
    seed: int
    prng: str
    counts: List[int]
    frequencies: List[float]
    analytic: List[float]
    max_abs_dev: float
    labels: List[str]


class ScenarioInfo(BaseModel):
    name: str
    description: str
    families: List[str]
    projectors: List[str]
    times: List[str]
    dim: int


class ExportResponse(BaseModel):
    name: str
    document: str


class FamilyListResponse(BaseModel):
    scenario: str
    families: Dict[str, List[str]]  # family -> elementary history labels
