"""Experiment configuration and the flat key=value config-file format.

Precedence: built-in defaults < config file < explicit overrides (CLI flags
or request fields). Every output artifact embeds the resolved config plus
the base seed, so a rerun from the artifact header reproduces it.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping


@dataclass
class ExperimentConfig:
    space: str = "5d"
    p1: str = "olmcts:350"
    p2: str = "ras"
    algo: str = "rmhc"              # rmhc | mabrmhc
    resamples: int = 5              # games per fitness call
    budget: int = 1000              # games per optimization trial
    trials: int = 30                # optimization trials
    sweep_trials: int = 11          # games per sweep point
    sample: int = 200               # sweep points (0 = full space)
    validate_games: int = 100       # games per validated genome
    audit_games: int = 30           # games per audited recommendation
    audit_every: int = 1            # audit every k-th generation (0 = final only)
    delta_mode: str = "signed"      # signed | magnitude
    recoil: bool = True
    seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.space not in ("5d", "6d"):
            raise ValueError(f"space must be '5d' or '6d', got {self.space!r}")
        if self.algo not in ("rmhc", "mabrmhc"):
            raise ValueError(f"algo must be 'rmhc' or 'mabrmhc', got {self.algo!r}")
        if self.delta_mode not in ("signed", "magnitude"):
            raise ValueError(f"delta_mode must be 'signed' or 'magnitude'")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        for name in ("resamples", "trials", "sweep_trials", "validate_games",
                     "audit_games"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.audit_every < 0:
            raise ValueError("audit_every must be >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def metadata_items(self) -> list[tuple[str, Any]]:
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def replace(self, **overrides) -> "ExperimentConfig":
        merged = {f.name: getattr(self, f.name) for f in fields(self)}
        merged.update(overrides)
        return ExperimentConfig(**merged)


_BOOL_STRINGS = {"true": True, "1": True, "yes": True, "on": True,
                 "false": False, "0": False, "no": False, "off": False}


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat key=value file; '#' starts a comment, blank lines ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def config_from_sources(file_values: Mapping[str, str] | None = None,
                        overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """Resolve a config from a parsed file plus explicit overrides."""
    known = {f.name: f.type for f in fields(ExperimentConfig)}
    values: dict[str, Any] = {}
    for key, raw in (file_values or {}).items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = _coerce(key, raw)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        values[key] = val
    return ExperimentConfig(**values)


def _coerce(key: str, raw: str) -> Any:
    default = getattr(ExperimentConfig(), key)
    if isinstance(default, bool):
        try:
            return _BOOL_STRINGS[raw.lower()]
        except KeyError:
            raise ValueError(f"config key {key!r} expects a boolean, got {raw!r}") from None
    if isinstance(default, int):
        return int(raw)
    return raw
