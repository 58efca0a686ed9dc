"""HTTP facade over the pipeline: browse ranked domains, launch generation
jobs, fetch novelty-scored ideas.

The service computes nothing of its own: every number in a payload comes
from the same core calls the batch CLI makes, so identical seeds and
configs produce identical values. Fine-tuning stays CLI-only.
"""

from __future__ import annotations

import logging
import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..config import ServiceSettings
from ..corpus import ProximityTable, rank_domains
from ..errors import DataError
from ..ideas import dedup_stats, generate_ideas, write_ideas_jsonl
from ..lm.backends import ModelBackend, load_checkpoint
from ..lm.config import GenerationConfig
from ..lm.training import has_checkpoint, latest_checkpoint
from ..novelty import TermVectorStore, idea_novelty, load_term_vectors
from .jobs import JobRegistry, JobState
from .schemas import DomainEntry, GenerateRequest, Health, IdeaEntry, JobAccepted, JobStatus

logger = logging.getLogger(__name__)

DEFAULT_TEMPERATURE = 0.9
DEFAULT_TOP_K = 50


class SessionState:
    """Loaded-once resources shared across requests."""

    def __init__(self, settings: ServiceSettings):
        self.settings = settings
        self.registry = JobRegistry(max_workers=1)
        self.proximity: ProximityTable | None = (
            ProximityTable.load(settings.proximity_table)
            if settings.proximity_table is not None
            else None
        )
        self.store: TermVectorStore | None = (
            load_term_vectors(settings.term_vectors)
            if settings.term_vectors is not None
            else None
        )
        self._backends: dict[str, ModelBackend] = {}
        self._backends_lock = threading.Lock()

    def backend_for(self, domain_id: str) -> tuple[ModelBackend, str]:
        checkpoint = latest_checkpoint(self.settings.checkpoints_dir / domain_id)
        key = checkpoint.path.as_posix()
        with self._backends_lock:
            backend = self._backends.get(key)
            if backend is None:
                backend = load_checkpoint(checkpoint.path)
                self._backends[key] = backend
        return backend, key


def create_app(settings: ServiceSettings) -> FastAPI:
    state = SessionState(settings)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        state.registry.shutdown()

    app = FastAPI(title="ideation service", lifespan=lifespan)
    app.state.session = state

    @app.exception_handler(RequestValidationError)
    async def validation_to_400(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/healthz", response_model=Health)
    def healthz() -> Health:
        return Health()

    @app.get("/domains", response_model=list[DomainEntry])
    def domains(target: str) -> list[DomainEntry]:
        if state.proximity is None:
            raise HTTPException(status_code=503, detail="no proximity table configured")
        try:
            ranked = rank_domains(state.proximity, target)
        except DataError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        names = settings.display_names
        return [
            DomainEntry(
                domain_id=r.domain_id,
                display_name=names.get(r.domain_id, r.display_name),
                rank=r.rank,
                proximity=r.proximity,
                has_checkpoint=has_checkpoint(settings.checkpoints_dir / r.domain_id),
            )
            for r in ranked
        ]

    @app.post("/generate", response_model=JobAccepted, status_code=202)
    def generate(request_body: GenerateRequest) -> JobAccepted:
        if not has_checkpoint(settings.checkpoints_dir / request_body.domain_id):
            raise HTTPException(status_code=409, detail="domain not fine-tuned")
        config = GenerationConfig(
            temperature=(
                request_body.temperature
                if request_body.temperature is not None
                else DEFAULT_TEMPERATURE
            ),
            top_k=request_body.top_k if request_body.top_k is not None else DEFAULT_TOP_K,
            max_new_tokens=settings.max_new_tokens,
            n_samples=request_body.n_samples,
            seed=request_body.seed,
        )

        def work(job_id: str) -> None:
            _run_generation(state, job_id, request_body, config)

        return JobAccepted(job_id=state.registry.submit(work))

    @app.get("/jobs/{job_id}", response_model=JobStatus)
    def job_status(job_id: str) -> JobStatus:
        job = state.registry.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        return JobStatus(status=job.state.value, progress=job.progress, error=job.error)

    @app.get("/jobs/{job_id}/ideas", response_model=list[IdeaEntry])
    def job_ideas(job_id: str) -> list[IdeaEntry]:
        job = state.registry.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown job")
        if job.state is not JobState.DONE:
            raise HTTPException(status_code=409, detail=f"job is {job.state.value}, not done")
        return [IdeaEntry(**entry) for entry in job.ideas]

    return app


def _run_generation(
    state: SessionState,
    job_id: str,
    request_body: GenerateRequest,
    config: GenerationConfig,
) -> None:
    backend, checkpoint_ref = state.backend_for(request_body.domain_id)
    ideas = generate_ideas(
        backend,
        request_body.target_keyword,
        request_body.domain_id,
        checkpoint_ref,
        config,
        progress=lambda done, total: state.registry.set_progress(job_id, done, total),
    )
    unique, _ = dedup_stats(ideas)
    unique_indices = {idea.sample_index for idea in unique}

    entries: list[dict] = []
    for idea in ideas:
        report = idea_novelty(idea, state.store) if state.store is not None else None
        entries.append(
            {
                "text": idea.text,
                "is_unique": idea.sample_index in unique_indices,
                "min_score": None if report is None else report.min_score,
                "argmin_pair": None if report is None else report.argmin_pair,
                "token_count": len(idea.text.split()),
            }
        )
    jobs_dir = state.settings.runs_dir / "jobs" / job_id
    write_ideas_jsonl(jobs_dir / "ideas.jsonl", ideas)
    state.registry.set_ideas(job_id, entries)
