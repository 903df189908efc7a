"""Open-loop MCTS agent."""
from __future__ import annotations

import numpy as np

from ..engine import Action, GameState
from ..engine.kernels import MISSILE_CAP, N_ACTIONS
from . import mcts_kernel
from .specs import AgentSpec


class OlmctsAgent:
    """Plans with open-loop MCTS against a uniform-random opponent model.

    Each decision runs exactly `iterations` tree iterations; in-tree own
    actions follow UCB1 over values normalized by the running min/max seen
    this decision, rollouts are uniform random for both players, and the
    leaf heuristic is the difference of the two players' scores. The
    returned move is the most-visited root action.
    """

    def __init__(self, spec: AgentSpec, seed: int):
        if spec.kind != "olmcts":
            raise ValueError(f"not an olmcts spec: {spec!r}")
        self.spec = spec
        self._rng = np.array([seed], dtype=np.uint64)
        max_nodes = spec.iterations + 1
        self._child = np.full((max_nodes, N_ACTIONS), mcts_kernel.NO_CHILD, dtype=np.int32)
        self._edge_n = np.zeros((max_nodes, N_ACTIONS), dtype=np.float64)
        self._edge_w = np.zeros((max_nodes, N_ACTIONS), dtype=np.float64)
        self._sim_ships = np.zeros((2, 8), dtype=np.float64)
        self._sim_scores = np.zeros(2, dtype=np.float64)
        self._sim_missiles = np.zeros((MISSILE_CAP, 6), dtype=np.float64)
        self._sim_rng = np.zeros(2, dtype=np.uint64)
        path_cap = 2 + min(spec.iterations, 500)
        self._path_nodes = np.zeros(path_cap, dtype=np.int32)
        self._path_actions = np.zeros(path_cap, dtype=np.int64)
        self._stats = np.zeros(3, dtype=np.int64)

    def act(self, state: GameState, player: int) -> Action:
        if state.is_over:
            raise ValueError("cannot act in a finished game")
        action = mcts_kernel.decide(
            state.ships, state.scores, state.missiles, state.n_missiles,
            state.tick, player - 1, state.cfg,
            self.spec.iterations, self.spec.rollout_depth, self.spec.ucb_constant,
            self._rng,
            self._sim_ships, self._sim_scores, self._sim_missiles, self._sim_rng,
            self._child, self._edge_n, self._edge_w,
            self._path_nodes, self._path_actions, self._stats,
        )
        return Action(action)

    @property
    def last_stats(self) -> dict:
        """Instrumentation from the most recent decision."""
        return {
            "forward_steps": int(self._stats[0]),
            "nodes": int(self._stats[1]),
            "max_depth": int(self._stats[2]),
            "root_visits": [float(v) for v in self._edge_n[0]],
        }
