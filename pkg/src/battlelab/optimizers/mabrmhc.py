"""Bandit-guided hill climber.

Instead of mutating a uniformly random gene, each dimension is treated as a
bandit and each of its legal values as an arm. The dimension to mutate is
the one with maximal urgency (a pessimistic UCB over its arms' best observed
fitness changes); the value to mutate to is the arm with maximal mean
fitness change plus a UCB exploration bonus. Acceptance compares the mutant
against the incumbent's running average, exactly as in the plain climber.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

from ..engine import ParamSpace
from ..evaluation import BudgetExhausted, BudgetLedger
from .common import HillClimberState, OptResult, make_log_record

TIE_BREAK_SCALE = 1e-6

DeltaMode = Literal["signed", "magnitude"]


@dataclass
class BanditStats:
    """Per-dimension, per-arm counters and fitness-change statistics.

    max_delta[d][k] is the best fitness change ever observed when mutating
    dimension d to value k ("signed" mode tracks the raw maximum,
    "magnitude" the maximum absolute change); mean_delta is the running
    mean of raw changes. Both start at 0 and are overwritten, not blended,
    by the first observation.
    """

    arm_pulls: list[list[int]]
    dim_pulls: list[int]
    max_delta: list[list[float]]
    mean_delta: list[list[float]]
    delta_mode: DeltaMode = "signed"

    @classmethod
    def for_space(cls, space: ParamSpace, delta_mode: DeltaMode = "signed") -> "BanditStats":
        sizes = [space.dim_size(d) for d in range(space.ndim)]
        return cls(
            arm_pulls=[[0] * n for n in sizes],
            dim_pulls=[0] * len(sizes),
            max_delta=[[0.0] * n for n in sizes],
            mean_delta=[[0.0] * n for n in sizes],
            delta_mode=delta_mode,
        )

    def record(self, d: int, k: int, delta: float) -> None:
        observed = abs(delta) if self.delta_mode == "magnitude" else delta
        pulls = self.arm_pulls[d][k]
        if pulls == 0:
            self.max_delta[d][k] = observed
            self.mean_delta[d][k] = delta
        else:
            self.max_delta[d][k] = max(self.max_delta[d][k], observed)
            self.mean_delta[d][k] = (self.mean_delta[d][k] * pulls + delta) / (pulls + 1)
        self.arm_pulls[d][k] = pulls + 1
        self.dim_pulls[d] += 1


def urgency(d: int, stats: BanditStats, rng) -> float:
    """Dimension-level selection score.

    Minimum over the dimension's arms of best-observed-change plus the
    dimension's exploration bonus, with a tiny uniform tie-break per arm.
    A never-mutated dimension is infinitely urgent.
    """
    pulls = stats.dim_pulls[d]
    if pulls == 0:
        return math.inf
    explore = math.sqrt(2.0 * math.log(pulls) / pulls)
    return min(
        stats.max_delta[d][k] + explore + rng.random() * TIE_BREAK_SCALE
        for k in range(len(stats.arm_pulls[d]))
    )


def select_arm(d: int, stats: BanditStats, rng) -> int:
    """Value index to mutate dimension d to.

    Unvisited arms win outright (uniformly among themselves); otherwise the
    arm maximizing mean change plus UCB exploration, tie-broken by a tiny
    uniform perturbation.
    """
    pulls = stats.arm_pulls[d]
    unvisited = [k for k, n in enumerate(pulls) if n == 0]
    if unvisited:
        return unvisited[rng.randrange(len(unvisited))]
    total = stats.dim_pulls[d]
    best_k = 0
    best_score = -math.inf
    for k, n in enumerate(pulls):
        score = (stats.mean_delta[d][k]
                 + math.sqrt(2.0 * math.log(total) / n)
                 + rng.random() * TIE_BREAK_SCALE)
        if score > best_score:
            best_score = score
            best_k = k
    return best_k


def _select_dimension(space: ParamSpace, stats: BanditStats, rng) -> tuple[int, list[float]]:
    urgencies = [urgency(d, stats, rng) for d in range(space.ndim)]
    best = max(urgencies)
    candidates = [d for d, u in enumerate(urgencies) if u == best]
    if len(candidates) == 1:
        return candidates[0], urgencies
    return candidates[rng.randrange(len(candidates))], urgencies


def mabrmhc_run(space: ParamSpace, oracle: Callable, resamples: int, budget: int,
                rng, *, ledger: BudgetLedger | None = None,
                delta_mode: DeltaMode = "signed") -> OptResult:
    """Run the bandit climber until `budget` games are consumed."""
    if budget < 2 * resamples:
        raise ValueError("budget must cover at least one generation (2 * resamples)")
    if ledger is None:
        ledger = BudgetLedger(games_allowed=budget)
    start_games = ledger.games_played
    state = HillClimberState(best=space.random_genome(rng))
    stats = BanditStats.for_space(space, delta_mode)
    result = OptResult(recommendation=state.best)

    generation = 0
    while True:
        d_star, urgencies = _select_dimension(space, stats, rng)
        k_star = select_arm(d_star, stats, rng)
        offspring = list(state.best)
        offspring[d_star] = k_star
        offspring = tuple(offspring)
        try:
            fit_x = oracle(state.best, resamples, ledger).value
            fit_y = oracle(offspring, resamples, ledger).value
        except BudgetExhausted:
            break
        generation += 1
        average_x = state.average_with(fit_x)
        delta = fit_y - average_x
        stats.record(d_star, k_star, delta)
        accepted = delta >= 0.0
        if accepted:
            state.accept(offspring, fit_y)
        else:
            state.reject(average_x)
        result.fitness_history.append((ledger.games_played - start_games, state.best_fit_so_far))
        result.recommendation_history.append(state.best)
        record = make_log_record(
            generation, ledger.games_played - start_games, state,
            offspring, fit_x, fit_y, accepted)
        record["selected_dim"] = d_star
        record["selected_value"] = k_star
        record["urgencies"] = [None if math.isinf(u) else u for u in urgencies]
        record["delta"] = delta
        result.log.append(record)

    result.recommendation = state.best
    result.generations = generation
    result.games_consumed = ledger.games_played - start_games
    return result
