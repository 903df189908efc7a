"""battlelab: a headless tuning workbench for a two-player space-battle game.

Evolves the game's rule parameters to maximize estimated skill-depth, using
agent-based play-testing as a noisy fitness oracle and two resampling-aware
hill climbers as optimizers. Exposes an HTTP service plus a thin-client CLI.
"""

__version__ = "0.1.0"

from .engine import (
    Action,
    GameOutcome,
    GameParams,
    GameState,
    ParamSpace,
    init_state,
    outcome,
    params_from_genome,
    score,
    space_for,
    step,
)

__all__ = [
    "Action",
    "GameOutcome",
    "GameParams",
    "GameState",
    "ParamSpace",
    "__version__",
    "init_state",
    "outcome",
    "params_from_genome",
    "score",
    "space_for",
    "step",
]
