"""Shared pieces of the two hill climbers.

Both optimizers keep a single incumbent genome whose fitness estimate is the
running mean of every noisy sample attributed to it since it last changed;
the sample counter resets to 1 on every acceptance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..engine import ParamSpace
from ..engine.params import Genome


@dataclass
class HillClimberState:
    """Incumbent bookkeeping shared by both climbers."""

    best: Genome
    best_fit_so_far: float = 0.0
    samples: int = 0  # fitness samples averaged into best_fit_so_far

    def average_with(self, incumbent_fit: float) -> float:
        return (self.best_fit_so_far * self.samples + incumbent_fit) / (self.samples + 1)

    def accept(self, genome: Genome, offspring_fit: float) -> None:
        self.best = genome
        self.best_fit_so_far = offspring_fit
        self.samples = 1

    def reject(self, averaged_fit: float) -> None:
        self.best_fit_so_far = averaged_fit
        self.samples += 1


@dataclass
class OptResult:
    """Trajectory of one optimization run."""

    recommendation: Genome
    fitness_history: list[tuple[int, float]] = field(default_factory=list)
    recommendation_history: list[Genome] = field(default_factory=list)
    generations: int = 0
    games_consumed: int = 0
    log: list[dict] = field(default_factory=list)


def mutate_one_gene(genome: Genome, space: ParamSpace, rng) -> Genome:
    """Uniformly pick one dimension, redraw its value uniformly.

    The draw runs over all legal values of the dimension, so the offspring
    equals the parent with probability 1/Dim(d).
    """
    if space.ndim < 1:
        raise ValueError("empty search space")
    d = rng.randrange(space.ndim)
    out = list(genome)
    out[d] = rng.randrange(space.dim_size(d))
    return tuple(out)


def make_log_record(generation: int, games_consumed: int, state: HillClimberState,
                    genome_evaluated: Genome, fit_incumbent: float,
                    fit_offspring: float, accepted: bool) -> dict:
    return {
        "generation": generation,
        "games_consumed": games_consumed,
        "genome": list(state.best),
        "offspring": list(genome_evaluated),
        "fit_incumbent": fit_incumbent,
        "fit_offspring": fit_offspring,
        "accepted": accepted,
        "best_fit_so_far": state.best_fit_so_far,
        "incumbent_samples": state.samples,
    }
