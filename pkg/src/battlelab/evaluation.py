"""Match running and the noisy fitness oracle.

A game's value is taken from player 1's perspective: 1 for a win, 0 for a
loss, 0.5 for a draw. Fitness of a genome is the mean value over r
independently seeded games, and every game consumed is charged against a
budget ledger.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .agents import AgentSpec, OlmctsAgent, RandomAgent, RotateAndShootAgent, make_agent
from .engine import GameParams, GameState, ParamSpace, init_state, outcome, params_from_genome, step
from .engine import kernels
from .engine.params import Genome
from .rng import derive_seed

GAME_RNG_TAG_P1 = 101
GAME_RNG_TAG_P2 = 102
AGENT_TAG_P1 = 11
AGENT_TAG_P2 = 12


@dataclass
class MatchResult:
    value: float  # game value for player 1
    final_state: GameState

    @property
    def scores(self) -> tuple[float, float]:
        return outcome(self.final_state).scores


class BudgetExhausted(Exception):
    """Raised when a fitness call would exceed the game budget."""


@dataclass
class BudgetLedger:
    """Counts games consumed against a hard cap."""

    games_allowed: int
    games_played: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def try_consume(self, n: int) -> bool:
        """Atomically reserve n games; whole calls only, never partial."""
        with self._lock:
            if self.games_played + n > self.games_allowed:
                return False
            self.games_played += n
            return True

    @property
    def remaining(self) -> int:
        return self.games_allowed - self.games_played


@dataclass(frozen=True)
class FitnessReport:
    genome: Genome
    resamples: int
    value: float
    games_consumed: int


def _policy_code(agent) -> Optional[int]:
    if isinstance(agent, RotateAndShootAgent):
        return kernels.POLICY_RAS
    if isinstance(agent, RandomAgent):
        return kernels.POLICY_RANDOM
    return None


def run_match(params: GameParams, agent1, agent2, seed: int, *,
              recoil: bool = True,
              player_seeds: tuple[int, int] | None = None,
              trace: Optional[list] = None) -> MatchResult:
    """Play one full game between two ready agents.

    Baseline-vs-baseline matches run entirely inside the jitted kernel;
    the object-layer loop handles planning agents and tracing. Both paths
    produce identical results for identical seeds.
    """
    state = init_state(params, seed, recoil=recoil, player_seeds=player_seeds)
    code1 = _policy_code(agent1)
    code2 = _policy_code(agent2)
    if trace is None and code1 is not None and code2 is not None:
        arng = _policy_rng(agent1, agent2)
        state.n_missiles = kernels.play_policies(
            state.ships, state.scores, state.missiles, state.n_missiles,
            state.rng, arng, state.cfg, code1, code2, 0, kernels.MAX_TICKS,
        )
        state.tick = kernels.MAX_TICKS
        return MatchResult(value=outcome(state).game_value(), final_state=state)

    if trace is not None:
        trace.append(state.trace_record())
    while not state.is_over:
        a1 = agent1.act(state, 1)
        a2 = agent2.act(state, 2)
        state = step(state, a1, a2)
        if trace is not None:
            trace.append(state.trace_record(actions=(int(a1), int(a2))))
    return MatchResult(value=outcome(state).game_value(), final_state=state)


def _policy_rng(agent1, agent2):
    import numpy as np

    arng = np.zeros(2, dtype=np.uint64)
    if isinstance(agent1, RandomAgent):
        arng[0] = agent1._rng[0]
    if isinstance(agent2, RandomAgent):
        arng[1] = agent2._rng[0]
    return arng


def play_game_detailed(params: GameParams, p1: AgentSpec, p2: AgentSpec, seed: int, *,
                       recoil: bool = True, trace: Optional[list] = None) -> MatchResult:
    """Build both agents from specs and play one seeded game."""
    agent1 = make_agent(p1, derive_seed(seed, AGENT_TAG_P1))
    agent2 = make_agent(p2, derive_seed(seed, AGENT_TAG_P2))
    return run_match(params, agent1, agent2, seed, recoil=recoil, trace=trace)


def play_game(params: GameParams, p1: AgentSpec, p2: AgentSpec, seed: int, *,
              recoil: bool = True, trace: Optional[list] = None) -> float:
    """As play_game_detailed, returning only the game value for player 1."""
    return play_game_detailed(params, p1, p2, seed, recoil=recoil, trace=trace).value


def resample_seed(run_seed: int, genome: Sequence[int], index: int) -> int:
    """Seed of the index-th game ever played on `genome` within one run."""
    return derive_seed(run_seed, *genome, index)


class FitnessOracle:
    """Noisy fitness of a genome: mean game value over r resampled games.

    Game seeds follow a per-genome schedule: the i-th game ever played on a
    genome within this oracle's run uses seed derive(run_seed, genome, i).
    Repeated fitness calls on the same genome therefore see fresh noise,
    while the schedule itself stays independent of evaluation order.
    """

    def __init__(self, space: ParamSpace, p1: AgentSpec, p2: AgentSpec,
                 run_seed: int, *, recoil: bool = True,
                 play_fn: Optional[Callable[..., float]] = None):
        self.space = space
        self.p1 = p1
        self.p2 = p2
        self.run_seed = run_seed
        self.recoil = recoil
        self.play_fn = play_fn or play_game
        self.calls = 0
        self._sample_counts: dict[Genome, int] = {}

    def __call__(self, genome: Sequence[int], resamples: int,
                 ledger: BudgetLedger) -> FitnessReport:
        if resamples < 1:
            raise ValueError("resamples must be >= 1")
        genome = self.space.validate_genome(genome)
        if not ledger.try_consume(resamples):
            raise BudgetExhausted(
                f"fitness call needs {resamples} games, only {ledger.remaining} left"
            )
        params = params_from_genome(self.space, genome)
        start = self._sample_counts.get(genome, 0)
        total = 0.0
        for i in range(resamples):
            seed = resample_seed(self.run_seed, genome, start + i)
            total += self.play_fn(params, self.p1, self.p2, seed, recoil=self.recoil)
        self._sample_counts[genome] = start + resamples
        self.calls += 1
        return FitnessReport(
            genome=genome,
            resamples=resamples,
            value=total / resamples,
            games_consumed=resamples,
        )
