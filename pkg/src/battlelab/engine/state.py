"""Object layer over the simulation kernels.

A `GameState` owns the flat arrays the kernels mutate. `step` is pure: it
clones the state and advances the clone, so planning agents can treat states
as values. Player ids are 1 and 2 throughout the public API.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from ..rng import derive_seed
from . import kernels
from .params import GameParams


class Action(IntEnum):
    DO_NOTHING = kernels.ACT_NONE
    ROTATE_CLOCKWISE = kernels.ACT_ROT_CW
    ROTATE_ANTICLOCKWISE = kernels.ACT_ROT_ACW
    THRUST = kernels.ACT_THRUST
    SHOOT = kernels.ACT_SHOOT


@dataclass(frozen=True)
class Ship:
    """Read-only snapshot of one ship."""

    position: tuple[float, float]
    velocity: tuple[float, float]
    heading: float
    cooldown_timer: int
    missiles_fired: int
    hits_scored: int


@dataclass(frozen=True)
class Missile:
    position: tuple[float, float]
    velocity: tuple[float, float]
    owner: int
    age: int


@dataclass(frozen=True)
class GameOutcome:
    winner: int  # 1, 2, or 0 for a draw
    scores: tuple[float, float]

    @property
    def is_draw(self) -> bool:
        return self.winner == 0

    def game_value(self) -> float:
        """Game value from player 1's perspective: 1 win, 0 loss, 0.5 draw."""
        if self.winner == 1:
            return 1.0
        if self.winner == 2:
            return 0.0
        return 0.5


def make_cfg(params: GameParams, recoil_scale: float) -> np.ndarray:
    return np.array(
        [
            params.max_ship_speed,
            params.thrust_speed,
            params.max_missile_speed,
            float(params.cooldown),
            params.missile_cost,
            params.ship_radius,
            recoil_scale,
        ],
        dtype=np.float64,
    )


class GameState:
    """Full simulation state at one tick."""

    __slots__ = ("params", "ships", "scores", "missiles", "n_missiles",
                 "tick", "rng", "recoil_scale", "cfg")

    def __init__(self, params: GameParams, ships: np.ndarray, scores: np.ndarray,
                 missiles: np.ndarray, n_missiles: int, tick: int,
                 rng: np.ndarray, recoil_scale: float, cfg: np.ndarray):
        self.params = params
        self.ships = ships
        self.scores = scores
        self.missiles = missiles
        self.n_missiles = n_missiles
        self.tick = tick
        self.rng = rng
        self.recoil_scale = recoil_scale
        self.cfg = cfg

    def clone(self) -> "GameState":
        return GameState(self.params, self.ships.copy(), self.scores.copy(),
                         self.missiles.copy(), self.n_missiles, self.tick,
                         self.rng.copy(), self.recoil_scale, self.cfg)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameState):
            return NotImplemented
        return (
            self.params == other.params
            and self.tick == other.tick
            and self.n_missiles == other.n_missiles
            and self.recoil_scale == other.recoil_scale
            and bool(np.array_equal(self.ships, other.ships))
            and bool(np.array_equal(self.scores, other.scores))
            and bool(np.array_equal(self.missiles[: self.n_missiles],
                                    other.missiles[: other.n_missiles]))
            and bool(np.array_equal(self.rng, other.rng))
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_over(self) -> bool:
        return self.tick >= kernels.MAX_TICKS

    def ship(self, player: int) -> Ship:
        row = self.ships[_index(player)]
        return Ship(
            position=(float(row[kernels.SX]), float(row[kernels.SY])),
            velocity=(float(row[kernels.SVX]), float(row[kernels.SVY])),
            heading=float(row[kernels.SHEAD]),
            cooldown_timer=int(row[kernels.SCOOL]),
            missiles_fired=int(row[kernels.SFIRED]),
            hits_scored=int(row[kernels.SHITS]),
        )

    def live_missiles(self) -> list[Missile]:
        out = []
        for m in range(self.n_missiles):
            row = self.missiles[m]
            out.append(Missile(
                position=(float(row[kernels.MX]), float(row[kernels.MY])),
                velocity=(float(row[kernels.MVX]), float(row[kernels.MVY])),
                owner=int(row[kernels.MOWNER]) + 1,
                age=int(row[kernels.MAGE]),
            ))
        return out

    def trace_record(self, actions: tuple[int, int] | None = None) -> dict:
        """Stable-ordered, JSON-ready snapshot of this tick."""
        rec: dict = {"tick": self.tick}
        rec["actions"] = (
            [Action(actions[0]).name, Action(actions[1]).name] if actions else None
        )
        rec["ships"] = [
            {
                "position": list(s.position),
                "velocity": list(s.velocity),
                "heading": s.heading,
                "cooldown": s.cooldown_timer,
                "missiles_fired": s.missiles_fired,
                "hits_scored": s.hits_scored,
            }
            for s in (self.ship(1), self.ship(2))
        ]
        rec["missiles"] = [
            {
                "position": list(m.position),
                "velocity": list(m.velocity),
                "owner": m.owner,
                "age": m.age,
            }
            for m in self.live_missiles()
        ]
        rec["scores"] = [score(self, 1), score(self, 2)]
        return rec


def _index(player: int) -> int:
    if player not in (1, 2):
        raise ValueError(f"player id must be 1 or 2, got {player}")
    return player - 1


def init_state(params: GameParams, seed: int, *, recoil: bool = True,
               player_seeds: tuple[int, int] | None = None) -> GameState:
    """Start a game: ships at rest in symmetric positions, facing each other.

    `player_seeds` overrides the per-ship recoil streams (normally derived
    from `seed`); passing swapped streams lets callers mirror a match.
    """
    ships = np.zeros((2, 8), dtype=np.float64)
    ships[0, kernels.SX] = kernels.ARENA_W * 0.25
    ships[0, kernels.SY] = kernels.ARENA_H * 0.5
    ships[0, kernels.SHEAD] = 0.0
    ships[1, kernels.SX] = kernels.ARENA_W * 0.75
    ships[1, kernels.SY] = kernels.ARENA_H * 0.5
    ships[1, kernels.SHEAD] = math.pi
    if player_seeds is None:
        player_seeds = (derive_seed(seed, 101), derive_seed(seed, 102))
    rng = np.array(player_seeds, dtype=np.uint64)
    recoil_scale = 1.0 if recoil else 0.0
    return GameState(
        params=params,
        ships=ships,
        scores=np.zeros(2, dtype=np.float64),
        missiles=np.zeros((kernels.MISSILE_CAP, 6), dtype=np.float64),
        n_missiles=0,
        tick=0,
        rng=rng,
        recoil_scale=recoil_scale,
        cfg=make_cfg(params, recoil_scale),
    )


def step(state: GameState, action1: Action | int, action2: Action | int) -> GameState:
    """Apply one simultaneous move pair and return the successor state."""
    if state.is_over:
        raise ValueError(f"game is over (tick {state.tick}); cannot step")
    a1 = int(action1)
    a2 = int(action2)
    if not (0 <= a1 < kernels.N_ACTIONS and 0 <= a2 < kernels.N_ACTIONS):
        raise ValueError(f"illegal action pair ({action1!r}, {action2!r})")
    nxt = state.clone()
    nxt.n_missiles = kernels.step_arrays(
        nxt.ships, nxt.scores, nxt.missiles, nxt.n_missiles, nxt.rng, a1, a2, nxt.cfg
    )
    nxt.tick += 1
    return nxt


def score(state: GameState, player: int) -> float:
    """100 points per hit on the opponent minus the cost per missile fired."""
    row = state.ships[_index(player)]
    return 100.0 * row[kernels.SHITS] - state.params.missile_cost * row[kernels.SFIRED]


def outcome(state: GameState) -> GameOutcome:
    """Final result; only defined once the full game has been played."""
    if not state.is_over:
        raise ValueError(f"game not finished (tick {state.tick} < {kernels.MAX_TICKS})")
    s1 = score(state, 1)
    s2 = score(state, 2)
    if s1 > s2:
        winner = 1
    elif s2 > s1:
        winner = 2
    else:
        winner = 0
    return GameOutcome(winner=winner, scores=(s1, s2))
