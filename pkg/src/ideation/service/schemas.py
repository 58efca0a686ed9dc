"""Request/response bodies for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class Health(BaseModel):
    status: str = "ok"


class DomainEntry(BaseModel):
    domain_id: str
    display_name: str
    rank: int
    proximity: float
    has_checkpoint: bool


class GenerateRequest(BaseModel):
    target_keyword: str = Field(min_length=1)
    domain_id: str = Field(min_length=1)
    n_samples: int = Field(ge=1)
    seed: int
    temperature: float | None = Field(default=None, gt=0)
    top_k: int | None = Field(default=None, ge=1)


class JobAccepted(BaseModel):
    job_id: str


class JobStatus(BaseModel):
    status: str
    progress: float = Field(ge=0.0, le=1.0)
    error: str | None = None


class IdeaEntry(BaseModel):
    text: str
    is_unique: bool
    min_score: float | None
    argmin_pair: tuple[str, str] | None
    token_count: int
