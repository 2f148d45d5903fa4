"""Request/response schemas for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..scenario import ScenarioConfig


class HealthResponse(BaseModel):
    status: str = "ok"


class DetectionModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    bbox: tuple[float, float, float, float]
    confidence: float
    class_name: str = Field(alias="class")


class CreateSessionRequest(BaseModel):
    config: ScenarioConfig


class CreateSessionResponse(BaseModel):
    session_id: str


class FrameRequest(BaseModel):
    t: int = Field(ge=0)
    fixation: tuple[int, int]
    detections: list[DetectionModel] = []


class FrameResponse(BaseModel):
    t: int
    action: tuple[int, int]
    entropy_total: float
    coverage: float
    evidence_nonzero: int
    skipped_detections: int


class BeliefResponse(BaseModel):
    fixation: tuple[int, int]
    q: list[list[float]]
    observed: list[list[bool]]
    entropy_total: float
    coverage: float


class EvaluationModel(BaseModel):
    fixation: tuple[int, int]
    info_gain: float
    utility: float
    g: float


class PolicyResponse(BaseModel):
    best: tuple[int, int]
    evaluations: list[EvaluationModel]


class SimulateRequest(BaseModel):
    scenario: ScenarioConfig
    steps: int = Field(default=20, ge=1)
    timing: bool = False
    snapshots: bool = False


class SimulateResponse(BaseModel):
    header: dict
    records: list[dict]
    summary: dict


class BenchRequest(BaseModel):
    grids: str = "16x16/5x5"
    reps: int = Field(default=1000, ge=100)
    seed: int = 0


class BenchGridReport(BaseModel):
    grid: str
    reps: int
    min_us: float
    median_us: float
    p99_us: float
    max_us: float
    params: dict


class BenchResponse(BaseModel):
    reports: list[BenchGridReport]


class RenderRequest(BaseModel):
    ndjson: str
    mode: str = "ascii"
    grid: Optional[str] = None  # KxL/WxH fallback when the trace has no header


class RenderResponse(BaseModel):
    content: str
    skipped: int
