"""Random-mutation hill climber for noisy fitness.

Per generation the incumbent and a one-gene mutant are both re-evaluated
with the noisy oracle. The mutant is accepted when its fresh estimate is at
least the incumbent's running average; otherwise the fresh incumbent sample
is folded into that average. The loop ends when the budget refuses a call.
"""
from __future__ import annotations

from typing import Callable

from ..engine import ParamSpace
from ..evaluation import BudgetExhausted, BudgetLedger
from .common import HillClimberState, OptResult, make_log_record, mutate_one_gene


def rmhc_run(space: ParamSpace, oracle: Callable, resamples: int, budget: int,
             rng, *, ledger: BudgetLedger | None = None) -> OptResult:
    """Run the climber until `budget` games are consumed.

    `oracle(genome, resamples, ledger)` must return a report with a `.value`
    and raise BudgetExhausted once the ledger cannot cover a full call.
    """
    if budget < 2 * resamples:
        raise ValueError("budget must cover at least one generation (2 * resamples)")
    if ledger is None:
        ledger = BudgetLedger(games_allowed=budget)
    start_games = ledger.games_played
    state = HillClimberState(best=space.random_genome(rng))
    result = OptResult(recommendation=state.best)

    generation = 0
    while True:
        offspring = mutate_one_gene(state.best, space, rng)
        try:
            fit_x = oracle(state.best, resamples, ledger).value
            fit_y = oracle(offspring, resamples, ledger).value
        except BudgetExhausted:
            break
        generation += 1
        average_x = state.average_with(fit_x)
        accepted = fit_y >= average_x
        if accepted:
            state.accept(offspring, fit_y)
        else:
            state.reject(average_x)
        result.fitness_history.append((ledger.games_played - start_games, state.best_fit_so_far))
        result.recommendation_history.append(state.best)
        result.log.append(make_log_record(
            generation, ledger.games_played - start_games, state,
            offspring, fit_x, fit_y, accepted))

    result.recommendation = state.best
    result.generations = generation
    result.games_consumed = ledger.games_played - start_games
    return result
