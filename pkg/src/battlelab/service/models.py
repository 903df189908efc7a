"""Request/response schemas for the HTTP service."""
from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from ..agents import parse_agent_spec
from ..config import ExperimentConfig


class ExperimentRequest(BaseModel):
    """Shared experiment knobs; unset fields fall back to config defaults."""

    space: Literal["5d", "6d"] = "5d"
    p1: str = "olmcts:350"
    p2: str = "ras"
    algo: Literal["rmhc", "mabrmhc"] = "rmhc"
    resamples: int = Field(default=5, ge=1)
    budget: int = Field(default=1000, ge=1)
    trials: int = Field(default=30, ge=1)
    sweep_trials: int = Field(default=11, ge=1)
    sample: int = Field(default=200, ge=0)
    validate_games: int = Field(default=100, ge=1)
    audit_games: int = Field(default=30, ge=1)
    audit_every: int = Field(default=1, ge=0)
    delta_mode: Literal["signed", "magnitude"] = "signed"
    recoil: bool = True
    seed: int = 0
    jobs: int = Field(default=1, ge=1)

    @field_validator("p1", "p2")
    @classmethod
    def _agent_spec_parses(cls, value: str) -> str:
        parse_agent_spec(value)
        return value

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(**self.model_dump())


class PlayRequest(BaseModel):
    space: Literal["5d", "6d"] = "5d"
    genome: list[int]
    p1: str = "olmcts:350"
    p2: str = "ras"
    seed: int = 0
    recoil: bool = True
    trace: bool = False

    @field_validator("p1", "p2")
    @classmethod
    def _agent_spec_parses(cls, value: str) -> str:
        parse_agent_spec(value)
        return value


class PlayResponse(BaseModel):
    value: float
    scores: tuple[float, float]
    winner: int
    params: dict[str, float]
    trace: Optional[list[dict]] = None


class FitnessRequest(BaseModel):
    space: Literal["5d", "6d"] = "5d"
    genome: list[int]
    p1: str = "olmcts:350"
    p2: str = "ras"
    resamples: int = Field(default=5, ge=1)
    seed: int = 0
    recoil: bool = True

    @field_validator("p1", "p2")
    @classmethod
    def _agent_spec_parses(cls, value: str) -> str:
        parse_agent_spec(value)
        return value


class FitnessResponse(BaseModel):
    genome: list[int]
    resamples: int
    value: float
    games_consumed: int


class MarginalsRequest(BaseModel):
    dimension: str
    sweep_csv: str


class MarginalsResponse(BaseModel):
    dimension: str
    rows: list[dict]
    csv: str


class ValidateRequest(ExperimentRequest):
    genomes: list[list[int]]


class BenchRequest(BaseModel):
    ticks: int = Field(default=200_000, ge=1000)
    seed: int = 0


class SpaceInfo(BaseModel):
    space: str
    dimensions: list[dict]
    size: int


class JobSubmitted(BaseModel):
    job_id: str
    kind: str


class JobStatus(BaseModel):
    job_id: str
    kind: str
    state: Literal["queued", "running", "done", "failed"]
    progress: float
    detail: Optional[str] = None
    error: Optional[str] = None


class JobResultEnvelope(BaseModel):
    job_id: str
    kind: str
    result: Any
