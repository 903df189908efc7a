from ..rng import derive_seed
from .olmcts import OlmctsAgent
from .simple import RandomAgent, RotateAndShootAgent
from .specs import AgentSpec, parse_agent_spec

Agent = RotateAndShootAgent | RandomAgent | OlmctsAgent


def make_agent(spec: AgentSpec, seed: int):
    """Build a ready-to-play agent; `seed` feeds any internal randomness.

    A spec-level seed, when present, is folded in so a pinned agent stays
    reproducible while still decorrelating across games.
    """
    if spec.seed is not None:
        seed = derive_seed(spec.seed, seed)
    if spec.kind == "ras":
        return RotateAndShootAgent()
    if spec.kind == "random":
        return RandomAgent(seed)
    return OlmctsAgent(spec, seed)


__all__ = [
    "Agent",
    "AgentSpec",
    "OlmctsAgent",
    "RandomAgent",
    "RotateAndShootAgent",
    "make_agent",
    "parse_agent_spec",
]
