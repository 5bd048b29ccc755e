# src/models/records.py
"""Run configuration and result records shared by the CLI and the HTTP routes."""

from __future__ import annotations

import math
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.config import Config
from src.errors import ConfigError
from src.models.core import Deformation, PhysicalParams
from src.models.potentials import CoulombLike, Delta, DoubleDelta, PotentialSpec

PotentialName = Literal["delta", "double-delta", "coulomb"]
SWEEP_PARAMETERS = ("beta", "u0", "a", "alpha", "A")
# JSON has no infinities; the extension flags travel as these strings
INFINITY_FLAGS = {"inf": math.inf, "+inf": math.inf, "-inf": -math.inf}


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        where = ".".join(str(item) for item in error.get("loc", ())) or "config"
        parts.append(f"{where}: {error.get('msg')}")
    return "; ".join(parts)


def _flag_or_value(value: float) -> Union[float, str]:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    potential: PotentialName = "delta"
    u0: float = 1.0
    a: float = 0.0
    alpha: float = 1.0
    A: float = 0.0
    beta: float = 0.0
    m: float = 1.0
    hbar: float = 1.0
    grid: int = Field(default_factory=lambda: Config.GRID_ORDER)
    n_states: int = Field(default_factory=lambda: Config.N_STATES)
    grid_scale: Optional[float] = None
    step_rule: Literal["spectral", "midpoint"] = "spectral"
    root_tol: float = Field(default_factory=lambda: Config.ROOT_TOL)
    quad_tol: float = Field(default_factory=lambda: Config.QUAD_EPSABS)
    fit_degree: int = Field(default_factory=lambda: Config.FIT_DEGREE)

    @field_validator("beta")
    @classmethod
    def _beta_non_negative(cls, value):
        if not (math.isfinite(value) and value >= 0):
            raise ValueError("beta must be a finite number >= 0")
        return value

    @field_validator("m", "hbar", "root_tol", "quad_tol")
    @classmethod
    def _strictly_positive(cls, value):
        if not (math.isfinite(value) and value > 0):
            raise ValueError("must be a finite number > 0")
        return value

    @field_validator("u0", "a", "alpha")
    @classmethod
    def _non_negative(cls, value):
        if not (math.isfinite(value) and value >= 0):
            raise ValueError("must be a finite number >= 0")
        return value

    @field_validator("A", mode="before")
    @classmethod
    def _infinity_flag(cls, value):
        if isinstance(value, str) and value.strip().lower() in INFINITY_FLAGS:
            return INFINITY_FLAGS[value.strip().lower()]
        return value

    @field_validator("A")
    @classmethod
    def _real(cls, value):
        if math.isnan(value):
            raise ValueError("must be a real number (+-inf select delta = 0 or 1)")
        return value

    @field_validator("grid")
    @classmethod
    def _grid_order(cls, value):
        if value < 16:
            raise ValueError("grid order must be >= 16")
        return value

    @field_validator("n_states", "fit_degree")
    @classmethod
    def _at_least_one(cls, value):
        if value < 1:
            raise ValueError("must be >= 1")
        return value

    @field_validator("grid_scale")
    @classmethod
    def _scale(cls, value):
        if value is not None and not (math.isfinite(value) and value > 0):
            raise ValueError("grid scale must be > 0")
        return value

    # --------------------
    # Construction
    # --------------------
    @classmethod
    def build(cls, *sources: Optional[Dict[str, Any]]) -> "RunConfig":
        """Merge sources left to right (later wins), skipping None values; ConfigError on bad input."""
        merged: Dict[str, Any] = {}
        for source in sources:
            if source:
                merged.update({k: v for k, v in source.items() if v is not None})
        try:
            return cls(**merged)
        except ValidationError as exc:
            raise ConfigError(f"invalid run configuration: {_validation_message(exc)}") from exc
        except TypeError as exc:
            raise ConfigError(f"invalid run configuration: {exc}") from exc

    @classmethod
    def from_file(cls, path: str, overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        """Flat JSON config file; ``overrides`` (CLI flags) take precedence over it."""
        try:
            with open(path, "rb") as handle:
                data = orjson.loads(handle.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except orjson.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a flat JSON object")
        return cls.build(data, overrides)

    def with_value(self, name: str, value: float) -> "RunConfig":
        return self.build(self.model_dump(), {name: value})

    # --------------------
    # Domain objects
    # --------------------
    def potential_spec(self) -> PotentialSpec:
        if self.potential == "delta":
            return Delta(u0=self.u0)
        if self.potential == "double-delta":
            return DoubleDelta(u0=self.u0, a=self.a)
        return CoulombLike(alpha=self.alpha, extension=self.A)

    def deformation(self) -> Deformation:
        return Deformation(self.beta)

    def params(self) -> PhysicalParams:
        return PhysicalParams(m=self.m, hbar=self.hbar)

    def echo(self) -> Dict[str, Any]:
        """The physically relevant part of the config, echoed into result records."""
        data = {"potential": self.potential, "beta": self.beta, "m": self.m, "hbar": self.hbar}
        data.update({k: v for k, v in self.potential_spec().to_dict().items() if k != "potential"})
        data.update({"grid": self.grid, "n_states": self.n_states})
        if "A" in data:
            data["A"] = _flag_or_value(data["A"])
        return data


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    parameter: Literal["beta", "u0", "a", "alpha", "A"]
    start: float
    stop: float
    count: int = Field(ge=1)
    log: bool = False

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """``PARAM:START:STOP:COUNT[:log]``."""
        parts = text.split(":")
        if len(parts) not in (4, 5) or (len(parts) == 5 and parts[4] != "log"):
            raise ConfigError(f"sweep must look like PARAM:START:STOP:COUNT[:log], got {text!r}")
        try:
            return cls(
                parameter=parts[0],
                start=float(parts[1]),
                stop=float(parts[2]),
                count=int(parts[3]),
                log=len(parts) == 5,
            )
        except (ValueError, ValidationError) as exc:
            raise ConfigError(f"invalid sweep {text!r}: {exc}") from exc

    def values(self) -> List[float]:
        if self.log:
            if not (self.start > 0 and self.stop > 0):
                raise ConfigError("a log sweep needs positive start and stop")
            points = np.geomspace(self.start, self.stop, self.count)
        else:
            points = np.linspace(self.start, self.stop, self.count)
        return [float(v) for v in points]


class StateRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: Union[int, str]
    energy: float
    q: float
    residual: Optional[float] = None
    oracle_energy: Optional[float] = None
    deviation: Optional[float] = None
    convergence: Optional[float] = None


class MetaRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: str
    grid: Optional[int] = None
    seconds: Optional[float] = None


class ResultRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: Dict[str, Any]
    states: List[StateRecord]
    derived: Dict[str, Any] = Field(default_factory=dict)
    meta: MetaRecord

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class SweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    sweep: SweepSpec
    values: List[float]
    records: List[ResultRecord]
    fit: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "sweep": self.sweep.model_dump(),
            "records": [
                dict(record.to_dict(), point={"parameter": self.sweep.parameter, "value": value})
                for value, record in zip(self.values, self.records)
            ],
        }
        if self.fit is not None:
            data["fit"] = self.fit
        return data
