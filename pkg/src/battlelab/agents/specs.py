"""Agent specifications and the string syntax used by config files and CLI.

Spec strings: "ras", "random", "olmcts:350", and optional tuning keys,
e.g. "olmcts:700,rollout=10,ucb=1.4142135623730951,seed=5".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

OLMCTS_DEFAULT_ITERATIONS = 350
OLMCTS_DEFAULT_ROLLOUT_DEPTH = 10
OLMCTS_DEFAULT_UCB = math.sqrt(2.0)

KINDS = ("ras", "random", "olmcts")


@dataclass(frozen=True)
class AgentSpec:
    """How to build one game-playing policy."""

    kind: str
    iterations: int = OLMCTS_DEFAULT_ITERATIONS
    rollout_depth: int = OLMCTS_DEFAULT_ROLLOUT_DEPTH
    ucb_constant: float = OLMCTS_DEFAULT_UCB
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown agent kind {self.kind!r} (expected one of {KINDS})")
        if self.kind == "olmcts":
            if self.iterations < 1:
                raise ValueError("olmcts iterations must be >= 1")
            if self.rollout_depth < 1:
                raise ValueError("olmcts rollout depth must be >= 1")

    def label(self) -> str:
        if self.kind == "olmcts":
            return f"olmcts:{self.iterations}"
        return self.kind


def parse_agent_spec(text: str) -> AgentSpec:
    body, _, opts = text.strip().lower().partition(",")
    kind, _, arg = body.partition(":")
    spec = AgentSpec(kind=kind)
    if arg:
        if kind != "olmcts":
            raise ValueError(f"agent {kind!r} takes no iteration count ({text!r})")
        spec = replace(spec, iterations=int(arg))
    for item in filter(None, (s.strip() for s in opts.split(","))):
        key, _, value = item.partition("=")
        if not value:
            raise ValueError(f"malformed agent option {item!r} in {text!r}")
        if key == "rollout":
            spec = replace(spec, rollout_depth=int(value))
        elif key == "ucb":
            spec = replace(spec, ucb_constant=float(value))
        elif key == "seed":
            spec = replace(spec, seed=int(value))
        else:
            raise ValueError(f"unknown agent option {key!r} in {text!r}")
    return spec
