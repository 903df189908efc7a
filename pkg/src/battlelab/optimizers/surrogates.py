"""Synthetic fitness landscapes for calibrating the optimizers.

A known-optimum surrogate stands in for the expensive game oracle when the
question is about optimizer behavior rather than the game: convergence
rates, resampling trade-offs, budget accounting.
"""
from __future__ import annotations

import random

from ..engine.params import ParamSpace
from ..evaluation import BudgetExhausted, BudgetLedger, FitnessReport


def binary_space(ndim: int) -> ParamSpace:
    return ParamSpace(tuple((f"bit{i}", (0.0, 1.0)) for i in range(ndim)))


class OneMaxOracle:
    """Fraction-of-ones fitness with optional per-game Gaussian noise.

    Each of the r resamples costs one budgeted game and returns
    true_fitness + N(0, sigma); the report carries their mean.
    """

    def __init__(self, ndim: int = 5, sigma: float = 0.0, seed: int = 0):
        self.ndim = ndim
        self.sigma = sigma
        self._rng = random.Random(seed)

    @property
    def optimum(self) -> tuple[int, ...]:
        return (1,) * self.ndim

    def true_fitness(self, genome) -> float:
        return sum(genome) / self.ndim

    def __call__(self, genome, resamples: int, ledger: BudgetLedger) -> FitnessReport:
        if not ledger.try_consume(resamples):
            raise BudgetExhausted(
                f"fitness call needs {resamples} games, only {ledger.remaining} left"
            )
        base = self.true_fitness(genome)
        if self.sigma > 0.0:
            value = sum(base + self._rng.gauss(0.0, self.sigma)
                        for _ in range(resamples)) / resamples
        else:
            value = base
        return FitnessReport(genome=tuple(genome), resamples=resamples,
                             value=value, games_consumed=resamples)


def games_to_first_optimum(result, optimum) -> float:
    """Games consumed when the incumbent first equals the optimum (inf if never)."""
    for (games, _), rec in zip(result.fitness_history, result.recommendation_history):
        if rec == tuple(optimum):
            return float(games)
    return float("inf")
