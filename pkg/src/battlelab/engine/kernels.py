"""Jitted simulation kernels.

All game rules live here, operating on flat numpy arrays so that planning
agents can run millions of forward-model ticks per second. The object layer
in `state.py` wraps these arrays; agents and the evaluation driver call the
kernels directly.

Array layouts (float64 unless noted):
  ships   (2, 8): x, y, vx, vy, heading, cooldown, missiles_fired, hits_scored
  scores  (2,):   incrementally maintained score per player
  missiles (64, 6): x, y, vx, vy, owner (0/1), age
  rng     (2,) uint64: one recoil stream per ship
  cfg     (7,): max_ship_speed, thrust_speed, max_missile_speed, cooldown,
                missile_cost, ship_radius, recoil_scale
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

ARENA_W = 640.0
ARENA_H = 480.0
MAX_TICKS = 500
TURN_STEP = math.pi / 16.0
FRICTION = 0.99
MISSILE_RADIUS = 4.0
MISSILE_LIFETIME = 30.0
MISSILE_SPAWN_GAP = 1.0
MISSILE_CAP = 64  # >= 2 * lifetime + 2, enough for firing every tick

# ships columns
SX, SY, SVX, SVY, SHEAD, SCOOL, SFIRED, SHITS = range(8)
# missiles columns
MX, MY, MVX, MVY, MOWNER, MAGE = range(6)
# cfg columns
CFG_SHIP_SPEED, CFG_THRUST, CFG_MISSILE_SPEED, CFG_COOLDOWN, CFG_COST, CFG_RADIUS, CFG_RECOIL = range(7)

ACT_NONE = 0
ACT_ROT_CW = 1
ACT_ROT_ACW = 2
ACT_THRUST = 3
ACT_SHOOT = 4
N_ACTIONS = 5

POLICY_IDLE = 0
POLICY_RAS = 1
POLICY_RANDOM = 2

TWO_PI = 2.0 * math.pi

_MIX_A = np.uint64(0x9E3779B97F4A7C15)
_MIX_B = np.uint64(0xBF58476D1CE4E5B9)
_MIX_C = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, inline="always")
def rng_next(state, i):
    """Advance stream i of a uint64 state array; splitmix64 output."""
    state[i] = state[i] + _MIX_A
    z = state[i]
    z = (z ^ (z >> np.uint64(30))) * _MIX_B
    z = (z ^ (z >> np.uint64(27))) * _MIX_C
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def rng_unit(state, i):
    """Uniform float in [0, 1)."""
    return float(rng_next(state, i) >> np.uint64(11)) * _U53


@njit(cache=True, inline="always")
def rng_below(state, i, n):
    """Uniform integer in [0, n). Modulo bias is negligible for small n."""
    return int(rng_next(state, i) % np.uint64(n))


@njit(cache=True, inline="always")
def _clamp_speed(ships, i, cap):
    sq = ships[i, SVX] * ships[i, SVX] + ships[i, SVY] * ships[i, SVY]
    if sq > cap * cap:
        scale = cap / math.sqrt(sq)
        ships[i, SVX] *= scale
        ships[i, SVY] *= scale


@njit(cache=True)
def step_arrays(ships, scores, missiles, n_missiles, rng, action_a, action_b, cfg):
    """One simultaneous-move tick. Returns the new live-missile count.

    Resolution order: actions (both read the pre-step state), ship and
    missile integration with toroidal wrap, ship friction, missile aging
    and expiry, missile-vs-opponent collisions, cooldown decrement.
    """
    v_cap = cfg[CFG_SHIP_SPEED]
    n = n_missiles
    for i in range(2):
        act = action_a if i == 0 else action_b
        if act == ACT_ROT_CW:
            ships[i, SHEAD] = (ships[i, SHEAD] - TURN_STEP) % TWO_PI
        elif act == ACT_ROT_ACW:
            ships[i, SHEAD] = (ships[i, SHEAD] + TURN_STEP) % TWO_PI
        elif act == ACT_THRUST:
            h = ships[i, SHEAD]
            ships[i, SVX] += cfg[CFG_THRUST] * math.cos(h)
            ships[i, SVY] += cfg[CFG_THRUST] * math.sin(h)
            _clamp_speed(ships, i, v_cap)
        elif act == ACT_SHOOT:
            if ships[i, SCOOL] == 0.0:
                h = ships[i, SHEAD]
                ux = math.cos(h)
                uy = math.sin(h)
                off = cfg[CFG_RADIUS] + MISSILE_RADIUS + MISSILE_SPAWN_GAP
                missiles[n, MX] = (ships[i, SX] + off * ux) % ARENA_W
                missiles[n, MY] = (ships[i, SY] + off * uy) % ARENA_H
                missiles[n, MVX] = cfg[CFG_MISSILE_SPEED] * ux
                missiles[n, MVY] = cfg[CFG_MISSILE_SPEED] * uy
                missiles[n, MOWNER] = float(i)
                missiles[n, MAGE] = 0.0
                n += 1
                ships[i, SFIRED] += 1.0
                scores[i] -= cfg[CFG_COST]
                ships[i, SCOOL] = cfg[CFG_COOLDOWN]
                # firing kicks the ship backwards by a random impulse
                mag = cfg[CFG_RECOIL] * rng_unit(rng, i)
                ships[i, SVX] -= mag * ux
                ships[i, SVY] -= mag * uy
                _clamp_speed(ships, i, v_cap)

    for i in range(2):
        ships[i, SX] = (ships[i, SX] + ships[i, SVX]) % ARENA_W
        ships[i, SY] = (ships[i, SY] + ships[i, SVY]) % ARENA_H
        ships[i, SVX] *= FRICTION
        ships[i, SVY] *= FRICTION

    hit_range = cfg[CFG_RADIUS] + MISSILE_RADIUS
    hit_range_sq = hit_range * hit_range
    w = 0
    for m in range(n):
        x = (missiles[m, MX] + missiles[m, MVX]) % ARENA_W
        y = (missiles[m, MY] + missiles[m, MVY]) % ARENA_H
        age = missiles[m, MAGE] + 1.0
        if age > MISSILE_LIFETIME:
            continue
        owner = int(missiles[m, MOWNER])
        target = 1 - owner
        dx = abs(x - ships[target, SX])
        if dx > ARENA_W * 0.5:
            dx = ARENA_W - dx
        dy = abs(y - ships[target, SY])
        if dy > ARENA_H * 0.5:
            dy = ARENA_H - dy
        if dx * dx + dy * dy <= hit_range_sq:
            ships[owner, SHITS] += 1.0
            scores[owner] += 100.0
            continue
        missiles[w, MX] = x
        missiles[w, MY] = y
        missiles[w, MVX] = missiles[m, MVX]
        missiles[w, MVY] = missiles[m, MVY]
        missiles[w, MOWNER] = missiles[m, MOWNER]
        missiles[w, MAGE] = age
        w += 1

    for i in range(2):
        if ships[i, SCOOL] > 0.0:
            ships[i, SCOOL] -= 1.0
    return w


@njit(cache=True, inline="always")
def policy_action(policy, ships, i, agent_rng):
    if policy == POLICY_RAS:
        if ships[i, SCOOL] == 0.0:
            return ACT_SHOOT
        return ACT_ROT_CW
    if policy == POLICY_RANDOM:
        return rng_below(agent_rng, i, N_ACTIONS)
    return ACT_NONE


@njit(cache=True)
def play_policies(ships, scores, missiles, n_missiles, rng, agent_rng, cfg,
                  policy_a, policy_b, start_tick, n_ticks):
    """Advance a game with built-in per-tick policies. Returns missile count.

    Must stay action-for-action identical to driving the same policies from
    the object layer: both actions are chosen from the pre-step state and
    the random policy draws exactly one value per tick from its stream.
    """
    n = n_missiles
    for _ in range(n_ticks):
        a = policy_action(policy_a, ships, 0, agent_rng)
        b = policy_action(policy_b, ships, 1, agent_rng)
        n = step_arrays(ships, scores, missiles, n, rng, a, b, cfg)
    return n


@njit(cache=True)
def bench_ticks(ships, scores, missiles, n_missiles, rng, cfg, n_ticks):
    """Tight forward-model loop with no agents attached (both ships idle)."""
    n = n_missiles
    for _ in range(n_ticks):
        n = step_arrays(ships, scores, missiles, n, rng, ACT_NONE, ACT_NONE, cfg)
    return n


def warmup() -> None:
    """Force jit compilation (disk-cached after the first process ever)."""
    ships = np.zeros((2, 8), dtype=np.float64)
    ships[1, SX] = 480.0
    ships[0, SX] = 160.0
    ships[:, SY] = 240.0
    scores = np.zeros(2, dtype=np.float64)
    missiles = np.zeros((MISSILE_CAP, 6), dtype=np.float64)
    rng = np.array([1, 2], dtype=np.uint64)
    agent_rng = np.array([3, 4], dtype=np.uint64)
    cfg = np.array([8.0, 3.0, 5.0, 3.0, 10.0, 20.0, 1.0], dtype=np.float64)
    play_policies(ships, scores, missiles, 0, rng, agent_rng, cfg,
                  POLICY_RAS, POLICY_RANDOM, 0, 8)
    bench_ticks(ships, scores, missiles, 0, rng, cfg, 4)
