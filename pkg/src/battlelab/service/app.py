"""HTTP service wrapping the workbench.

Fast operations (play, fitness, marginals, bench) answer synchronously;
sweeps, optimization campaigns and validation runs are submitted as jobs
and polled. The CLI is a thin client of these endpoints.
"""
from __future__ import annotations

from contextlib import asynccontextmanager
from dataclasses import asdict

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import __version__
from ..agents import parse_agent_spec
from ..engine import params_from_genome, space_for
from ..engine.kernels import warmup
from ..evaluation import BudgetLedger, FitnessOracle, play_game_detailed
from ..experiments import (
    bench,
    marginals,
    optimize_experiment,
    parse_sweep_csv,
    sweep,
    validate,
)
from . import models
from .jobs import Job, JobRegistry


def create_app() -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        warmup()
        yield
        app.state.registry.shutdown()

    app = FastAPI(title="battlelab", version=__version__, lifespan=lifespan)
    app.state.registry = JobRegistry()

    @app.exception_handler(ValueError)
    async def value_error_handler(_, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/space/{selector}", response_model=models.SpaceInfo)
    async def space_info(selector: str) -> models.SpaceInfo:
        space = space_for(selector)
        return models.SpaceInfo(
            space=selector,
            dimensions=[{"name": name, "values": list(values)}
                        for name, values in space.dims],
            size=space.size(),
        )

    @app.post("/play", response_model=models.PlayResponse)
    def play(req: models.PlayRequest) -> models.PlayResponse:
        space = space_for(req.space)
        params = params_from_genome(space, req.genome)
        trace: list | None = [] if req.trace else None
        match = play_game_detailed(params, parse_agent_spec(req.p1),
                                   parse_agent_spec(req.p2), req.seed,
                                   recoil=req.recoil, trace=trace)
        winner = 1 if match.value == 1.0 else (2 if match.value == 0.0 else 0)
        return models.PlayResponse(value=match.value, scores=match.scores,
                                   winner=winner, params=params.as_dict(), trace=trace)

    @app.post("/fitness", response_model=models.FitnessResponse)
    def fitness(req: models.FitnessRequest) -> models.FitnessResponse:
        space = space_for(req.space)
        oracle = FitnessOracle(space, parse_agent_spec(req.p1),
                               parse_agent_spec(req.p2), req.seed, recoil=req.recoil)
        report = oracle(tuple(req.genome), req.resamples,
                        BudgetLedger(games_allowed=req.resamples))
        return models.FitnessResponse(
            genome=list(report.genome), resamples=report.resamples,
            value=report.value, games_consumed=report.games_consumed)

    @app.post("/marginals", response_model=models.MarginalsResponse)
    def marginals_endpoint(req: models.MarginalsRequest) -> models.MarginalsResponse:
        _, records = parse_sweep_csv(req.sweep_csv)
        result = marginals(records, req.dimension)
        return models.MarginalsResponse(
            dimension=result.dimension,
            rows=[asdict(row) for row in result.rows],
            csv=result.csv,
        )

    @app.post("/bench")
    def bench_endpoint(req: models.BenchRequest) -> dict:
        return bench(ticks=req.ticks, seed=req.seed)

    @app.post("/jobs/sweep", response_model=models.JobSubmitted, status_code=202)
    def submit_sweep(req: models.ExperimentRequest) -> models.JobSubmitted:
        cfg = req.to_config()

        def runner(job: Job):
            result = sweep(cfg, progress=job.set_progress)
            return {
                "n_points": len(result.records),
                "records": [_record_dict(rec) for rec in result.records],
                "csv": result.csv,
            }

        job = app.state.registry.submit("sweep", runner)
        return models.JobSubmitted(job_id=job.job_id, kind=job.kind)

    @app.post("/jobs/optimize", response_model=models.JobSubmitted, status_code=202)
    def submit_optimize(req: models.ExperimentRequest) -> models.JobSubmitted:
        cfg = req.to_config()

        def runner(job: Job):
            result = optimize_experiment(cfg, progress=job.set_progress)
            return {
                "generations": result.generations,
                "curve_rows": result.curve_rows,
                "summary_rows": result.summary_rows,
                "final_audit_mean": result.final_audit_mean,
                "curves_csv": result.curves_csv,
                "summary_csv": result.summary_csv,
                "runs_jsonl": result.runs_jsonl,
            }

        job = app.state.registry.submit("optimize", runner)
        return models.JobSubmitted(job_id=job.job_id, kind=job.kind)

    @app.post("/jobs/validate", response_model=models.JobSubmitted, status_code=202)
    def submit_validate(req: models.ValidateRequest) -> models.JobSubmitted:
        cfg = req.to_config()
        genomes = [tuple(g) for g in req.genomes]
        space = space_for(cfg.space)
        for g in genomes:
            space.validate_genome(g)

        def runner(job: Job):
            result = validate(genomes, cfg, progress=job.set_progress)
            return {
                "records": [_record_dict(rec) for rec in result.records],
                "mean_winrate_pct": result.mean_winrate_pct,
                "csv": result.csv,
            }

        job = app.state.registry.submit("validate", runner)
        return models.JobSubmitted(job_id=job.job_id, kind=job.kind)

    @app.get("/jobs")
    async def list_jobs() -> list[models.JobStatus]:
        return [_status(job) for job in app.state.registry.all_jobs()]

    @app.get("/jobs/{job_id}", response_model=models.JobStatus)
    async def job_status(job_id: str) -> models.JobStatus:
        job = app.state.registry.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no such job {job_id!r}")
        return _status(job)

    @app.get("/jobs/{job_id}/result", response_model=models.JobResultEnvelope)
    async def job_result(job_id: str) -> models.JobResultEnvelope:
        job = app.state.registry.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no such job {job_id!r}")
        if job.state == "failed":
            raise HTTPException(status_code=409, detail=job.error or "job failed")
        if job.state != "done":
            raise HTTPException(status_code=409,
                                detail=f"job {job_id} is {job.state}, not done")
        return models.JobResultEnvelope(job_id=job.job_id, kind=job.kind,
                                        result=job.result)

    return app


def _record_dict(rec) -> dict:
    out = asdict(rec)
    out["genome"] = list(out["genome"])
    return out


def _status(job: Job) -> "models.JobStatus":
    return models.JobStatus(job_id=job.job_id, kind=job.kind, state=job.state,
                            progress=job.progress, detail=job.detail, error=job.error)
