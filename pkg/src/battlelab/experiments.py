"""Experiment harness: landscape sweeps, optimizer campaigns, validation.

Every artifact embeds the resolved config as '# key=value' metadata lines
ahead of the CSV header row (or as a leading meta record in JSON-lines), and
every game seed is derived from the config's base seed, so reruns reproduce
artifacts bit-for-bit at jobs=1 and value-identically at any parallelism.
"""
from __future__ import annotations

import io
import math
import random
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import __version__
from .agents import parse_agent_spec
from .config import ExperimentConfig
from .engine import GameParams, ParamSpace, init_state, params_from_genome, space_for
from .engine import kernels
from .engine.params import PARAM_TABLE, Genome
from .evaluation import FitnessOracle, BudgetLedger, play_game, resample_seed
from .optimizers import mabrmhc_run, rmhc_run
from .parallel import ProgressFn, run_indexed
from .rng import derive_seed

SWEEP_TAG = 21
SWEEP_SAMPLE_TAG = 22
VALIDATE_TAG = 23
TRIAL_TAG = 31
AUDIT_TAG = 32

PARAM_NAMES = tuple(name for name, _ in PARAM_TABLE)


@dataclass
class SweepRecord:
    """Mean game value of one parameter point over repeated trials."""

    index: int
    genome: Genome
    params: GameParams
    trials: int
    mean_value: float
    std_err: float


@dataclass
class SweepResult:
    config: ExperimentConfig
    records: list[SweepRecord]
    csv: str


@dataclass
class MarginalRow:
    dimension: str
    value: float
    points: int
    mean_value: float
    std_err: float


@dataclass
class MarginalsResult:
    dimension: str
    rows: list[MarginalRow]
    csv: str


@dataclass
class OptimizeResult:
    config: ExperimentConfig
    generations: int
    curve_rows: list[dict]
    summary_rows: list[dict]
    final_audit_mean: float
    curves_csv: str
    summary_csv: str
    runs_jsonl: str


@dataclass
class ValidateRecord:
    index: int
    genome: Genome
    params: GameParams
    games: int
    mean_value: float
    winrate_pct: float


@dataclass
class ValidateResult:
    config: ExperimentConfig
    records: list[ValidateRecord]
    mean_winrate_pct: float
    csv: str


def _meta_lines(kind: str, cfg: ExperimentConfig) -> list[str]:
    lines = [f"# battlelab={__version__} artifact={kind}"]
    lines += [f"# {key}={value}" for key, value in cfg.metadata_items()]
    return lines


def _fmt(x: float) -> str:
    return repr(float(x))


def _mean_se(values: Sequence[float]) -> tuple[float, float]:
    mean = sum(values) / len(values)
    if len(values) < 2:
        return mean, 0.0
    return mean, statistics.stdev(values) / math.sqrt(len(values))


# ---------------------------------------------------------------------------
# sweep

def select_genomes(space: ParamSpace, sample: int, seed: int) -> list[Genome]:
    """Every genome in enumeration order, or a sorted uniform subsample."""
    total = space.size()
    if sample <= 0 or sample >= total:
        return [space.genome_at(i) for i in range(total)]
    rng = random.Random(derive_seed(seed, SWEEP_SAMPLE_TAG))
    picks = sorted(rng.sample(range(total), sample))
    return [space.genome_at(i) for i in picks]


def _sweep_point(args) -> tuple[float, float]:
    (space_sel, p1_str, p2_str, trials, recoil, seed, genome) = args
    space = space_for(space_sel)
    p1 = parse_agent_spec(p1_str)
    p2 = parse_agent_spec(p2_str)
    params = params_from_genome(space, genome)
    run_seed = derive_seed(seed, SWEEP_TAG)
    values = [
        play_game(params, p1, p2, resample_seed(run_seed, genome, i), recoil=recoil)
        for i in range(trials)
    ]
    mean = sum(values) / trials
    sd = statistics.stdev(values) if trials > 1 else 0.0
    return mean, sd / math.sqrt(trials)


def sweep(cfg: ExperimentConfig, progress: ProgressFn = None,
          play_fn: Optional[Callable] = None) -> SweepResult:
    """Evaluate every selected parameter point with `sweep_trials` games."""
    space = space_for(cfg.space)
    genomes = select_genomes(space, cfg.sample, cfg.seed)

    if play_fn is not None:
        # injected game function: run inline, bypassing the worker pool
        p1 = parse_agent_spec(cfg.p1)
        p2 = parse_agent_spec(cfg.p2)
        run_seed = derive_seed(cfg.seed, SWEEP_TAG)
        stats = []
        for genome in genomes:
            params = params_from_genome(space, genome)
            values = [play_fn(params, p1, p2, resample_seed(run_seed, genome, i),
                              recoil=cfg.recoil) for i in range(cfg.sweep_trials)]
            mean = sum(values) / cfg.sweep_trials
            sd = statistics.stdev(values) if cfg.sweep_trials > 1 else 0.0
            stats.append((mean, sd / math.sqrt(cfg.sweep_trials)))
    else:
        tasks = [(cfg.space, cfg.p1, cfg.p2, cfg.sweep_trials, cfg.recoil, cfg.seed, g)
                 for g in genomes]
        stats = run_indexed(tasks, _sweep_point, cfg.jobs, progress)

    records = [
        SweepRecord(index=space.flat_index(g), genome=g,
                    params=params_from_genome(space, g),
                    trials=cfg.sweep_trials, mean_value=mean, std_err=se)
        for g, (mean, se) in zip(genomes, stats)
    ]
    return SweepResult(config=cfg, records=records,
                       csv=render_sweep_csv(cfg, space, records))


def render_sweep_csv(cfg: ExperimentConfig, space: ParamSpace,
                     records: list[SweepRecord]) -> str:
    out = io.StringIO()
    for line in _meta_lines("sweep", cfg):
        out.write(line + "\n")
    gene_cols = [f"g{d}" for d in range(space.ndim)]
    out.write(",".join(["index", *gene_cols, *PARAM_NAMES, "trials",
                        "mean_value", "std_err"]) + "\n")
    for rec in records:
        row = [str(rec.index)]
        row += [str(i) for i in rec.genome]
        row += [_fmt(v) for v in rec.params.as_dict().values()]
        row += [str(rec.trials), _fmt(rec.mean_value), _fmt(rec.std_err)]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def parse_sweep_csv(text: str) -> tuple[dict[str, str], list[SweepRecord]]:
    """Read back a sweep artifact; returns (metadata, records)."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    records: list[SweepRecord] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, value = line.lstrip("# ").partition("=")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = cells
            continue
        row = dict(zip(header, cells))
        ndim = sum(1 for name in header if name.startswith("g") and name[1:].isdigit())
        genome = tuple(int(row[f"g{d}"]) for d in range(ndim))
        records.append(SweepRecord(
            index=int(row["index"]),
            genome=genome,
            params=GameParams(**{name: float(row[name]) if name != "cooldown"
                                 else int(float(row[name])) for name in PARAM_NAMES}),
            trials=int(row["trials"]),
            mean_value=float(row["mean_value"]),
            std_err=float(row["std_err"]),
        ))
    if header is None:
        raise ValueError("not a sweep artifact: no header row found")
    return meta, records


# ---------------------------------------------------------------------------
# marginals

def marginals(records: Sequence[SweepRecord], dimension: str,
              cfg: Optional[ExperimentConfig] = None) -> MarginalsResult:
    """Group sweep records by one parameter's value; mean and SE per group."""
    if not records:
        raise ValueError("no sweep records to marginalize")
    if dimension not in PARAM_NAMES:
        raise ValueError(f"unknown dimension {dimension!r} (expected one of {PARAM_NAMES})")
    groups: dict[float, list[float]] = {}
    for rec in records:
        value = float(getattr(rec.params, dimension))
        groups.setdefault(value, []).append(rec.mean_value)
    rows = []
    for value in sorted(groups):
        mean, se = _mean_se(groups[value])
        rows.append(MarginalRow(dimension=dimension, value=value,
                                points=len(groups[value]), mean_value=mean, std_err=se))
    out = io.StringIO()
    if cfg is not None:
        for line in _meta_lines("marginals", cfg):
            out.write(line + "\n")
    out.write("dimension,value,points,mean_value,std_err\n")
    for row in rows:
        out.write(",".join([row.dimension, _fmt(row.value), str(row.points),
                            _fmt(row.mean_value), _fmt(row.std_err)]) + "\n")
    return MarginalsResult(dimension=dimension, rows=rows, csv=out.getvalue())


def between_group_variance(rows: Sequence[MarginalRow]) -> float:
    """Population-weighted variance of group means around the global mean."""
    total = sum(row.points for row in rows)
    global_mean = sum(row.mean_value * row.points for row in rows) / total
    return sum(row.points * (row.mean_value - global_mean) ** 2 for row in rows) / total


# ---------------------------------------------------------------------------
# optimize

def _run_trial(args):
    (cfg_space, p1_str, p2_str, algo, resamples, budget, recoil,
     delta_mode, base_seed, trial_idx) = args
    space = space_for(cfg_space)
    run_seed = derive_seed(base_seed, TRIAL_TAG, trial_idx)
    oracle = FitnessOracle(space, parse_agent_spec(p1_str), parse_agent_spec(p2_str),
                           derive_seed(run_seed, 1), recoil=recoil)
    rng = random.Random(derive_seed(run_seed, 2))
    ledger = BudgetLedger(games_allowed=budget)
    if algo == "mabrmhc":
        return mabrmhc_run(space, oracle, resamples, budget, rng,
                           ledger=ledger, delta_mode=delta_mode)
    return rmhc_run(space, oracle, resamples, budget, rng, ledger=ledger)


def _audit_genome(args):
    (cfg_space, p1_str, p2_str, audit_games, recoil, base_seed, genome) = args
    space = space_for(cfg_space)
    p1 = parse_agent_spec(p1_str)
    p2 = parse_agent_spec(p2_str)
    params = params_from_genome(space, genome)
    values = [
        play_game(params, p1, p2, derive_seed(base_seed, AUDIT_TAG, *genome, i),
                  recoil=recoil)
        for i in range(audit_games)
    ]
    return sum(values) / audit_games


def audit_genomes(cfg: ExperimentConfig, genomes: Sequence[Genome],
                  progress: ProgressFn = None) -> dict[Genome, float]:
    """Independently re-estimate the true quality of each distinct genome.

    Audit seeds depend only on the base seed and the genome, never on which
    trial or generation asked, so results are cacheable and order-free.
    """
    distinct = sorted(set(tuple(g) for g in genomes))
    tasks = [(cfg.space, cfg.p1, cfg.p2, cfg.audit_games, cfg.recoil, cfg.seed, g)
             for g in distinct]
    values = run_indexed(tasks, _audit_genome, cfg.jobs, progress)
    return dict(zip(distinct, values))


def optimize_experiment(cfg: ExperimentConfig, progress: ProgressFn = None) -> OptimizeResult:
    """Run independent optimization trials and aggregate learning curves.

    Curves carry the mean/SE of the incumbent's fitness estimate per
    generation plus, at audited generations, the mean/SE of the audited
    (true) quality of the recommendations. audit_every=0 audits only the
    final recommendation of each trial.
    """
    space = space_for(cfg.space)
    tasks = [(cfg.space, cfg.p1, cfg.p2, cfg.algo, cfg.resamples, cfg.budget,
              cfg.recoil, cfg.delta_mode, cfg.seed, t) for t in range(cfg.trials)]
    results = run_indexed(tasks, _run_trial, cfg.jobs, progress)

    generations = min(res.generations for res in results) if results else 0
    audited_gens = [g for g in range(1, generations + 1)
                    if (cfg.audit_every and g % cfg.audit_every == 0) or g == generations]
    needed = [res.recommendation_history[g - 1] for res in results for g in audited_gens]
    audit_values = audit_genomes(cfg, needed) if needed else {}

    curve_rows = []
    for g in range(1, generations + 1):
        fits = [res.fitness_history[g - 1][1] for res in results]
        mean_fit, se_fit = _mean_se(fits)
        row = {
            "generation": g,
            "games_consumed": results[0].fitness_history[g - 1][0],
            "mean_best_fit": mean_fit,
            "se_best_fit": se_fit,
            "audited_trials": 0,
            "mean_audit_value": None,
            "se_audit_value": None,
        }
        if g in audited_gens:
            audits = [audit_values[res.recommendation_history[g - 1]] for res in results]
            row["audited_trials"] = len(audits)
            row["mean_audit_value"], row["se_audit_value"] = _mean_se(audits)
        curve_rows.append(row)

    summary_rows = []
    final_audits = []
    for t, res in enumerate(results):
        final_audit = audit_values.get(res.recommendation)
        if final_audit is None:
            final_audit = audit_values.get(res.recommendation_history[generations - 1])
        final_audits.append(final_audit)
        summary_rows.append({
            "trial": t,
            "genome": list(res.recommendation),
            "params": params_from_genome(space, res.recommendation).as_dict(),
            "generations": res.generations,
            "games_consumed": res.games_consumed,
            "final_audit_value": final_audit,
        })
    final_audit_mean = (sum(v for v in final_audits if v is not None) / len(final_audits)
                        if final_audits else 0.0)

    return OptimizeResult(
        config=cfg,
        generations=generations,
        curve_rows=curve_rows,
        summary_rows=summary_rows,
        final_audit_mean=final_audit_mean,
        curves_csv=_render_curves_csv(cfg, curve_rows),
        summary_csv=_render_summary_csv(cfg, space, summary_rows),
        runs_jsonl=_render_runs_jsonl(cfg, results),
    )


def _render_curves_csv(cfg: ExperimentConfig, rows: list[dict]) -> str:
    out = io.StringIO()
    for line in _meta_lines("curves", cfg):
        out.write(line + "\n")
    out.write("generation,games_consumed,mean_best_fit,se_best_fit,"
              "audited_trials,mean_audit_value,se_audit_value\n")
    for row in rows:
        cells = [str(row["generation"]), str(row["games_consumed"]),
                 _fmt(row["mean_best_fit"]), _fmt(row["se_best_fit"]),
                 str(row["audited_trials"]),
                 "" if row["mean_audit_value"] is None else _fmt(row["mean_audit_value"]),
                 "" if row["se_audit_value"] is None else _fmt(row["se_audit_value"])]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def _render_summary_csv(cfg: ExperimentConfig, space: ParamSpace,
                        rows: list[dict]) -> str:
    out = io.StringIO()
    for line in _meta_lines("summary", cfg):
        out.write(line + "\n")
    gene_cols = [f"g{d}" for d in range(space.ndim)]
    out.write(",".join(["trial", *gene_cols, *PARAM_NAMES,
                        "generations", "games_consumed", "final_audit_value"]) + "\n")
    for row in rows:
        cells = [str(row["trial"])]
        cells += [str(i) for i in row["genome"]]
        cells += [_fmt(row["params"][name]) for name in PARAM_NAMES]
        cells += [str(row["generations"]), str(row["games_consumed"]),
                  "" if row["final_audit_value"] is None else _fmt(row["final_audit_value"])]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def _render_runs_jsonl(cfg: ExperimentConfig, results) -> str:
    import json

    out = io.StringIO()
    meta = {"record": "meta", "battlelab": __version__, "artifact": "runs"}
    meta.update({k: v for k, v in cfg.metadata_items()})
    out.write(json.dumps(meta, sort_keys=True) + "\n")
    for t, res in enumerate(results):
        for rec in res.log:
            line = {"record": "generation", "trial": t}
            line.update(rec)
            out.write(json.dumps(line, sort_keys=True) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# validate

def _validate_genome(args):
    (cfg_space, p1_str, p2_str, games, recoil, base_seed, genome) = args
    space = space_for(cfg_space)
    p1 = parse_agent_spec(p1_str)
    p2 = parse_agent_spec(p2_str)
    params = params_from_genome(space, genome)
    values = [
        play_game(params, p1, p2, derive_seed(base_seed, VALIDATE_TAG, *genome, i),
                  recoil=recoil)
        for i in range(games)
    ]
    return sum(values) / games


def validate(genomes: Sequence[Genome], cfg: ExperimentConfig,
             progress: ProgressFn = None) -> ValidateResult:
    """Re-play recommended genomes and report mean win rate percentages."""
    if not genomes:
        raise ValueError("no genomes to validate")
    space = space_for(cfg.space)
    genomes = [space.validate_genome(g) for g in genomes]
    tasks = [(cfg.space, cfg.p1, cfg.p2, cfg.validate_games, cfg.recoil, cfg.seed, g)
             for g in genomes]
    means = run_indexed(tasks, _validate_genome, cfg.jobs, progress)
    records = [
        ValidateRecord(index=i, genome=g, params=params_from_genome(space, g),
                       games=cfg.validate_games, mean_value=mean,
                       winrate_pct=100.0 * mean)
        for i, (g, mean) in enumerate(zip(genomes, means))
    ]
    mean_pct = sum(rec.winrate_pct for rec in records) / len(records)

    out = io.StringIO()
    for line in _meta_lines("validate", cfg):
        out.write(line + "\n")
    gene_cols = [f"g{d}" for d in range(space.ndim)]
    out.write(",".join(["index", *gene_cols, *PARAM_NAMES, "games",
                        "mean_value", "winrate_pct"]) + "\n")
    for rec in records:
        cells = [str(rec.index)]
        cells += [str(i) for i in rec.genome]
        cells += [_fmt(v) for v in rec.params.as_dict().values()]
        cells += [str(rec.games), _fmt(rec.mean_value), _fmt(rec.winrate_pct)]
        out.write(",".join(cells) + "\n")
    return ValidateResult(config=cfg, records=records,
                          mean_winrate_pct=mean_pct, csv=out.getvalue())


# ---------------------------------------------------------------------------
# bench

def bench(ticks: int = 200_000, seed: int = 0) -> dict:
    """Engine throughput with no agents attached, plus a full-battle figure."""
    kernels.warmup()
    params = params_from_genome(space_for("5d"), (2, 2, 4, 2, 3))

    state = init_state(params, seed)
    start = time.perf_counter()
    kernels.bench_ticks(state.ships, state.scores, state.missiles,
                        state.n_missiles, state.rng, state.cfg, ticks)
    idle_elapsed = time.perf_counter() - start

    import numpy as np

    games = max(1, ticks // (4 * kernels.MAX_TICKS))
    start = time.perf_counter()
    for i in range(games):
        st = init_state(params, derive_seed(seed, i))
        arng = np.array([derive_seed(seed, i, 1), derive_seed(seed, i, 2)],
                        dtype=np.uint64)
        kernels.play_policies(st.ships, st.scores, st.missiles, st.n_missiles,
                              st.rng, arng, st.cfg, kernels.POLICY_RAS,
                              kernels.POLICY_RAS, 0, kernels.MAX_TICKS)
    battle_elapsed = time.perf_counter() - start

    return {
        "ticks": ticks,
        "idle_ticks_per_sec": ticks / idle_elapsed,
        "battle_games": games,
        "battle_ticks_per_sec": games * kernels.MAX_TICKS / battle_elapsed,
        "battle_games_per_sec": games / battle_elapsed,
    }
