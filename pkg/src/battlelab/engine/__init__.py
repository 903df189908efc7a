from .params import (
    DEFAULT_SHIP_RADIUS,
    GameParams,
    Genome,
    PARAM_TABLE,
    ParamSpace,
    params_from_genome,
    space_for,
)
from .state import (
    Action,
    GameOutcome,
    GameState,
    Missile,
    Ship,
    init_state,
    outcome,
    score,
    step,
)

__all__ = [
    "Action",
    "DEFAULT_SHIP_RADIUS",
    "GameOutcome",
    "GameParams",
    "GameState",
    "Genome",
    "Missile",
    "PARAM_TABLE",
    "ParamSpace",
    "Ship",
    "init_state",
    "outcome",
    "params_from_genome",
    "score",
    "space_for",
    "step",
]
