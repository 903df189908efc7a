"""Jitted open-loop MCTS decision loop.

The tree stores per-node statistics for the planning player's five actions;
nodes are addressed by action-sequence prefix, never by state. Every
iteration re-simulates from a copy of the root state, so the (stochastic)
forward model is sampled afresh along the whole prefix.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from ..engine.kernels import (
    MAX_TICKS,
    N_ACTIONS,
    rng_below,
    rng_next,
    step_arrays,
)

NO_CHILD = -1


@njit(cache=True)
def decide(ships, scores, missiles, n_missiles, tick, me0, cfg,
           iterations, rollout_depth, ucb_c, agent_rng,
           sim_ships, sim_scores, sim_missiles, sim_rng,
           child, edge_n, edge_w, path_nodes, path_actions, out_stats):
    """Run one full decision and return the most-visited root action.

    The caller owns all scratch buffers; root arrays are never written.
    out_stats receives (forward-model steps, nodes created, max path depth).
    """
    max_nodes = child.shape[0]
    child[:iterations + 1] = NO_CHILD
    edge_n[:iterations + 1] = 0.0
    edge_w[:iterations + 1] = 0.0
    node_count = 1  # root
    vmin = np.inf
    vmax = -np.inf
    opp0 = 1 - me0
    total_steps = 0
    max_depth = 0

    for _ in range(iterations):
        sim_ships[:] = ships
        sim_scores[:] = scores
        for m in range(n_missiles):
            for c in range(6):
                sim_missiles[m, c] = missiles[m, c]
        nmis = n_missiles
        t = tick
        sim_rng[0] = rng_next(agent_rng, 0)
        sim_rng[1] = rng_next(agent_rng, 0)

        node = 0
        depth = 0
        expanded = False
        while t < MAX_TICKS:
            own = -1
            for a in range(N_ACTIONS):
                if edge_n[node, a] == 0.0:
                    own = a
                    break
            if own < 0:
                visits = 0.0
                for a in range(N_ACTIONS):
                    visits += edge_n[node, a]
                log_visits = np.log(visits)
                best = -np.inf
                own = 0
                for a in range(N_ACTIONS):
                    q = edge_w[node, a] / edge_n[node, a]
                    if vmax > vmin:
                        q = (q - vmin) / (vmax - vmin)
                    else:
                        q = 0.0
                    u = q + ucb_c * np.sqrt(log_visits / edge_n[node, a])
                    if u > best:
                        best = u
                        own = a
            else:
                expanded = True

            opp = rng_below(sim_rng, 0, N_ACTIONS)
            if me0 == 0:
                nmis = step_arrays(sim_ships, sim_scores, sim_missiles, nmis,
                                   sim_rng, own, opp, cfg)
            else:
                nmis = step_arrays(sim_ships, sim_scores, sim_missiles, nmis,
                                   sim_rng, opp, own, cfg)
            t += 1
            total_steps += 1
            path_nodes[depth] = node
            path_actions[depth] = own
            depth += 1

            if expanded:
                nxt = child[node, own]
                if nxt == NO_CHILD and node_count < max_nodes:
                    nxt = node_count
                    child[node, own] = nxt
                    node_count += 1
                break
            node = child[node, own]

        if not expanded:
            # reached the end of the game inside the tree
            pass
        else:
            for _ in range(rollout_depth):
                if t >= MAX_TICKS:
                    break
                own_r = rng_below(sim_rng, 0, N_ACTIONS)
                opp_r = rng_below(sim_rng, 0, N_ACTIONS)
                if me0 == 0:
                    nmis = step_arrays(sim_ships, sim_scores, sim_missiles, nmis,
                                       sim_rng, own_r, opp_r, cfg)
                else:
                    nmis = step_arrays(sim_ships, sim_scores, sim_missiles, nmis,
                                       sim_rng, opp_r, own_r, cfg)
                t += 1
                total_steps += 1

        value = sim_scores[me0] - sim_scores[opp0]
        if value < vmin:
            vmin = value
        if value > vmax:
            vmax = value
        for p in range(depth):
            edge_n[path_nodes[p], path_actions[p]] += 1.0
            edge_w[path_nodes[p], path_actions[p]] += value
        if depth > max_depth:
            max_depth = depth

    best_action = 0
    best_visits = -1.0
    for a in range(N_ACTIONS):
        if edge_n[0, a] > best_visits:
            best_visits = edge_n[0, a]
            best_action = a

    out_stats[0] = total_steps
    out_stats[1] = node_count
    out_stats[2] = max_depth
    return best_action
