"""Rule-parameter space of the space-battle game.

The game is configured by six discrete parameters. The first five span the
standard search space (14,400 points); adding the ship radius as a sixth
dimension expands it to 72,000 points.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from typing import Iterator, Sequence

PARAM_TABLE: tuple[tuple[str, tuple[float, ...]], ...] = (
    ("max_ship_speed", (4, 6, 8, 10)),
    ("thrust_speed", (1, 2, 3, 4, 5)),
    ("max_missile_speed", (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)),
    ("cooldown", (1, 2, 3, 4, 5, 6, 7, 8, 9)),
    ("missile_cost", (0, 1, 5, 10, 20, 50, 75, 100)),
    ("ship_radius", (10, 20, 30, 40, 50)),
)

DEFAULT_SHIP_RADIUS = 20.0

Genome = tuple[int, ...]


@dataclass(frozen=True)
class GameParams:
    """One concrete rule configuration (a single game instance)."""

    max_ship_speed: float
    thrust_speed: float
    max_missile_speed: float
    cooldown: int
    missile_cost: float
    ship_radius: float = DEFAULT_SHIP_RADIUS

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ParamSpace:
    """An ordered set of searchable dimensions, each with its legal values."""

    dims: tuple[tuple[str, tuple[float, ...]], ...]

    def __post_init__(self) -> None:
        for name, values in self.dims:
            if len(values) < 2:
                raise ValueError(f"dimension {name!r} needs at least 2 legal values")
            if len(set(values)) != len(values):
                raise ValueError(f"dimension {name!r} has duplicate legal values")

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def dim_size(self, d: int) -> int:
        return len(self.dims[d][1])

    def size(self) -> int:
        n = 1
        for _, values in self.dims:
            n *= len(values)
        return n

    def dim_index(self, name: str) -> int:
        for d, (dim_name, _) in enumerate(self.dims):
            if dim_name == name:
                return d
        raise KeyError(f"unknown dimension {name!r}")

    def validate_genome(self, genome: Sequence[int]) -> Genome:
        if len(genome) != self.ndim:
            raise ValueError(
                f"genome length {len(genome)} != space dimension {self.ndim}"
            )
        for d, idx in enumerate(genome):
            if not 0 <= idx < self.dim_size(d):
                raise ValueError(
                    f"gene {d} index {idx} out of range [0, {self.dim_size(d)})"
                )
        return tuple(int(i) for i in genome)

    def genome_at(self, flat_index: int) -> Genome:
        """Decode a flat enumeration index (last dimension varies fastest)."""
        if not 0 <= flat_index < self.size():
            raise ValueError(f"flat index {flat_index} out of range")
        out = []
        for _, values in reversed(self.dims):
            flat_index, idx = divmod(flat_index, len(values))
            out.append(idx)
        return tuple(reversed(out))

    def flat_index(self, genome: Sequence[int]) -> int:
        genome = self.validate_genome(genome)
        flat = 0
        for d, idx in enumerate(genome):
            flat = flat * self.dim_size(d) + idx
        return flat

    def all_genomes(self) -> Iterator[Genome]:
        ranges = [range(len(values)) for _, values in self.dims]
        yield from itertools.product(*ranges)

    def random_genome(self, rng) -> Genome:
        return tuple(rng.randrange(self.dim_size(d)) for d in range(self.ndim))


def space_for(selector: str) -> ParamSpace:
    """Build the 5-dim or 6-dim search space from the legal-value table."""
    if selector in ("5d", "5-dim", "5"):
        return ParamSpace(PARAM_TABLE[:5])
    if selector in ("6d", "6-dim", "6"):
        return ParamSpace(PARAM_TABLE)
    raise ValueError(f"unknown space selector {selector!r} (expected '5d' or '6d')")


def params_from_genome(space: ParamSpace, genome: Sequence[int]) -> GameParams:
    """Map per-dimension value indices to a concrete rule configuration.

    Dimensions absent from the space keep their defaults (a 5-dim space
    leaves the ship radius at 20).
    """
    genome = space.validate_genome(genome)
    values = {name: vals[idx] for (name, vals), idx in zip(space.dims, genome)}
    return GameParams(
        max_ship_speed=float(values["max_ship_speed"]),
        thrust_speed=float(values["thrust_speed"]),
        max_missile_speed=float(values["max_missile_speed"]),
        cooldown=int(values["cooldown"]),
        missile_cost=float(values["missile_cost"]),
        ship_radius=float(values.get("ship_radius", DEFAULT_SHIP_RADIUS)),
    )
