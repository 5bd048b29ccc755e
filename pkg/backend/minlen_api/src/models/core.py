# src/models/core.py
"""Deformed-algebra kinematics shared by every solver.

The auxiliary momentum ``p`` lives on the open interval ``(-p_max, p_max)`` with
``p_max = pi / (2 sqrt(beta))``; the physical momentum is ``tan(sqrt(beta) p) / sqrt(beta)``.
``beta = 0`` is the undeformed limit and is handled by branch, never by a limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from src.errors import DomainError, InvalidParameterError

if TYPE_CHECKING:
    from src.services.numerics import QuadratureGrid

__all__ = [
    "CUTOFF_CLAMP",
    "PhysicalParams",
    "Deformation",
    "BoundState",
    "Wavefunction",
    "deformed_kinetic",
    "momentum_domain",
]

# evaluation never goes closer to +-p_max than this relative distance
CUTOFF_CLAMP = 1e-12

Label = Union[str, int]


@dataclass(frozen=True)
class PhysicalParams:
    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be a finite positive number, got {value!r}")

    def to_dict(self):
        return {"m": self.m, "hbar": self.hbar}


@dataclass(frozen=True)
class Deformation:
    beta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise InvalidParameterError(f"beta must be a finite non-negative number, got {self.beta!r}")

    @property
    def is_deformed(self) -> bool:
        return self.beta > 0

    @property
    def sqrt_beta(self) -> float:
        return math.sqrt(self.beta)

    @property
    def p_max(self) -> float:
        if self.beta == 0:
            return math.inf
        return math.pi / (2.0 * self.sqrt_beta)

    def minimal_length(self, params: PhysicalParams) -> float:
        """Smallest position uncertainty, hbar * sqrt(beta)."""
        return params.hbar * self.sqrt_beta

    def check_momentum(self, p):
        """Raise DomainError unless every |p| < p_max; return p clamped off the cutoff."""
        p = np.asarray(p, dtype=float)
        if not np.all(np.isfinite(p)) and self.beta > 0:
            raise DomainError("momentum must be finite in deformed space")
        if self.beta == 0:
            return p
        p_max = self.p_max
        if np.any(np.abs(p) >= p_max):
            raise DomainError(f"momentum outside the open domain (-{p_max:.17g}, {p_max:.17g})")
        limit = p_max * (1.0 - CUTOFF_CLAMP)
        return np.clip(p, -limit, limit)

    def to_dict(self):
        return {"beta": self.beta, "p_max": self.p_max}


def momentum_domain(deformation: Deformation) -> Tuple[float, float]:
    """``(-p_max, p_max)``; ``(-inf, inf)`` when undeformed."""
    p_max = deformation.p_max
    return (-p_max, p_max)


def deformed_kinetic(p, deformation: Deformation, params: PhysicalParams):
    """Kinetic energy tan^2(sqrt(beta) p) / (2 m beta), or p^2 / 2m at beta = 0.

    Accepts a scalar or an array; scalars come back as float.
    """
    scalar = np.ndim(p) == 0
    p = deformation.check_momentum(p)
    if deformation.beta == 0:
        value = p * p / (2.0 * params.m)
    else:
        value = np.tan(deformation.sqrt_beta * p) ** 2 / (2.0 * params.m * deformation.beta)
    return float(value) if scalar else value


@dataclass(frozen=True)
class BoundState:
    energy: float
    q: float
    label: Label
    residual: float = 0.0
    diagnostics: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (self.q > 0 and math.isfinite(self.q)):
            raise InvalidParameterError(f"decay parameter q must be positive, got {self.q!r}")
        if not self.energy < 0:
            raise InvalidParameterError(f"bound-state energy must be negative, got {self.energy!r}")

    @classmethod
    def from_q(cls, q: float, params: PhysicalParams, label: Label, residual: float = 0.0, **diagnostics):
        return cls(energy=-q * q / (2.0 * params.m), q=q, label=label, residual=residual, diagnostics=diagnostics)

    def to_dict(self):
        return {
            "label": self.label,
            "energy": self.energy,
            "q": self.q,
            "residual": self.residual,
        }


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """Normalized momentum-space eigenfunction.

    ``evaluator`` maps momenta to complex amplitudes; ``amplitudes`` are its values on
    ``grid`` (a tangent grid adapted to the state), from which norms, overlaps and the
    X and 1/X operators are computed.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    grid: "QuadratureGrid"
    amplitudes: np.ndarray
    norm_constant: Optional[complex]
    deformation: Deformation

    @classmethod
    def sampled(cls, evaluator, grid, norm_constant, deformation):
        amplitudes = np.asarray(evaluator(grid.nodes), dtype=complex)
        amplitudes.setflags(write=False)
        return cls(evaluator, grid, amplitudes, norm_constant, deformation)

    def __call__(self, p):
        p = self.deformation.check_momentum(p)
        return np.asarray(self.evaluator(p), dtype=complex)

    @property
    def samples(self) -> List[Tuple[float, float, complex]]:
        return list(zip(self.grid.nodes.tolist(), self.grid.weights.tolist(), self.amplitudes.tolist()))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * np.abs(self.amplitudes) ** 2)))

    def inner(self, other: "Wavefunction") -> complex:
        """<self|other> on this wavefunction's grid."""
        values = other(self.grid.nodes)
        return complex(np.sum(self.grid.weights * np.conj(self.amplitudes) * values))

    def parity_defect(self, parity: int) -> float:
        """max |phi(-p) - parity * phi(p)| over the (symmetric) sampling grid."""
        return float(np.max(np.abs(self.amplitudes[::-1] - parity * self.amplitudes)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.amplitudes)))

    def to_dict(self, include_samples: bool = False):
        data: Dict[str, Any] = {
            "norm": self.norm(),
            "norm_constant": _complex_to_json(self.norm_constant),
            "nodes": self.grid.order,
        }
        if include_samples:
            data["samples"] = [
                {"p": p, "weight": w, "re": a.real, "im": a.imag} for p, w, a in self.samples
            ]
        return data


def _complex_to_json(value: Optional[complex]) -> Optional[Union[float, Dict[str, float]]]:
    if value is None:
        return None
    value = complex(value)
    if value.imag == 0:
        return value.real
    return {"re": value.real, "im": value.imag}
