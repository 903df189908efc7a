from .common import HillClimberState, OptResult, mutate_one_gene
from .mabrmhc import BanditStats, mabrmhc_run, select_arm, urgency
from .rmhc import rmhc_run

__all__ = [
    "BanditStats",
    "HillClimberState",
    "OptResult",
    "mabrmhc_run",
    "mutate_one_gene",
    "rmhc_run",
    "select_arm",
    "urgency",
]
