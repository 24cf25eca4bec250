"""Run configuration assembled from the environment, an optional JSON file
and command line overrides (in increasing order of precedence)."""
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import gaussian_dfa.envs as envs
from gaussian_dfa.errors import ModelParseError
from gaussian_dfa.logger import init_logger

logger = init_logger(__name__)

OUTPUT_FORMATS = ("text", "json")
ODE_METHODS = ("RK23", "RK45", "DOP853")


@dataclass
class Tolerances:
    sym: float = field(default_factory=lambda: envs.GAUSS_DFA_TOL_SYM)
    # 0 selects the automatic rank tolerance
    rank: float = field(default_factory=lambda: envs.GAUSS_DFA_TOL_RANK)
    span: float = field(default_factory=lambda: envs.GAUSS_DFA_SPAN_TOL)
    subspace: float = field(
        default_factory=lambda: envs.GAUSS_DFA_SUBSPACE_TOL)
    quad: float = field(default_factory=lambda: envs.GAUSS_DFA_QUAD_TOL)
    ode: float = field(default_factory=lambda: envs.GAUSS_DFA_ODE_TOL)


@dataclass
class Config:
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_format: str = field(
        default_factory=lambda: envs.GAUSS_DFA_OUTPUT_FORMAT)
    seed: int = field(default_factory=lambda: envs.GAUSS_DFA_SEED)
    quad_limit: int = field(default_factory=lambda: envs.GAUSS_DFA_QUAD_LIMIT)
    ode_method: str = field(default_factory=lambda: envs.GAUSS_DFA_ODE_METHOD)

    def __post_init__(self):
        self.verify()

    def verify(self) -> None:
        for name, value in dataclasses.asdict(self.tolerances).items():
            if name == "rank":
                if value < 0:
                    raise ValueError(
                        f"tolerance 'rank' must be >= 0, got {value}")
            elif not value > 0:
                raise ValueError(f"tolerance {name!r} must be > 0, got {value}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {OUTPUT_FORMATS}, "
                             f"got {self.output_format!r}")
        if self.quad_limit < 1:
            raise ValueError("quad_limit must be positive")
        if self.ode_method not in ODE_METHODS:
            raise ValueError(f"ode_method must be one of {ODE_METHODS}, got "
                             f"{self.ode_method!r}")

    def updated(self, overrides: dict[str, Any]) -> "Config":
        """Return a copy with the given (possibly nested) fields replaced.
        `None` values are ignored."""
        tolerance_overrides = {
            k: v
            for k, v in (overrides.get("tolerances") or {}).items()
            if v is not None
        }
        unknown = set(tolerance_overrides) - {
            f.name
            for f in dataclasses.fields(Tolerances)
        }
        if unknown:
            raise ValueError(f"unknown tolerances: {sorted(unknown)}")
        top_level = {
            k: v
            for k, v in overrides.items() if k != "tolerances" and v is not None
        }
        unknown = set(top_level) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return dataclasses.replace(
            self,
            tolerances=dataclasses.replace(self.tolerances,
                                           **tolerance_overrides),
            **top_level)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def load_config(path: Optional[Union[str, Path]] = None,
                overrides: Optional[dict[str, Any]] = None) -> Config:
    """Build a Config from environment defaults, then the JSON file at
    `path`, then `overrides`."""
    config = Config()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ModelParseError(f"invalid config file {path}: {e}") from e
        if not isinstance(data, dict):
            raise ModelParseError(
                f"config file {path} must hold a JSON object")
        logger.debug("Loaded config overrides from %s: %s", path, data)
        config = config.updated(data)
    if overrides:
        config = config.updated(overrides)
    return config
