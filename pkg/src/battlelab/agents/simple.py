"""Baseline policies: rotate-and-shoot and uniform random."""
from __future__ import annotations

import numpy as np

from ..engine import Action, GameState
from ..engine import kernels


class RotateAndShootAgent:
    """Fires whenever the cooldown permits, rotates clockwise otherwise.

    Deterministic, so the number of missiles fired over a full game depends
    only on the cooldown parameter.
    """

    def act(self, state: GameState, player: int) -> Action:
        if state.ship(player).cooldown_timer == 0:
            return Action.SHOOT
        return Action.ROTATE_CLOCKWISE


class RandomAgent:
    """Uniform over the five actions; one draw per decision."""

    def __init__(self, seed: int):
        self._rng = np.array([seed], dtype=np.uint64)

    def act(self, state: GameState, player: int) -> Action:
        return Action(kernels.rng_below(self._rng, 0, kernels.N_ACTIONS))
