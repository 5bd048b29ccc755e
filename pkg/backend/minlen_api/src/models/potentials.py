# src/models/potentials.py
"""Momentum-space kernels U(p, p') of the three supported potentials.

Kernels are the undeformed ones; the deformation only enters through the
kinetic term and the compact momentum domain.

    Delta        V(x) = -2 pi hbar U0 delta(x)             U = -U0
    DoubleDelta  V(x) = -pi hbar U0 [delta(x-a) + delta(x+a)]
                                                           U = -U0 cos(a (p - p') / hbar)
    CoulombLike  V = -alpha (v.p. 1/|x| + A pi delta(x))   U = -(alpha / 2 hbar)(2i theta(p' - p) - i + A)

The step uses theta(0) = 1/2, which keeps the discretized diagonal real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, ClassVar, Dict, Optional, Type

import numpy as np

from src.errors import InvalidParameterError
from src.models.core import Deformation, PhysicalParams

__all__ = [
    "PotentialSpec",
    "Delta",
    "DoubleDelta",
    "CoulombLike",
    "POTENTIALS",
    "KernelFn",
    "kernel",
    "kernel_matrix",
    "hermiticity_defect",
    "potential_from_dict",
]

KernelFn = Callable[["PotentialSpec", np.ndarray, np.ndarray, PhysicalParams], np.ndarray]


def _check_coupling(name: str, value: float):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    if value < 0:
        raise InvalidParameterError(
            f"{name} must be non-negative (attractive); got {value!r}, a repulsive well has no bound states"
        )


class PotentialSpec:
    """Base for the tagged union of supported potentials."""

    kind: ClassVar[str] = ""
    real_kernel: ClassVar[bool] = True

    def kernel_values(self, p: np.ndarray, p_prime: np.ndarray, params: PhysicalParams) -> np.ndarray:
        raise NotImplementedError

    @property
    def coupling(self) -> float:
        raise NotImplementedError

    def to_dict(self) -> Dict[str, object]:
        raise NotImplementedError


@dataclass(frozen=True)
class Delta(PotentialSpec):
    u0: float

    kind: ClassVar[str] = "delta"

    def __post_init__(self):
        _check_coupling("u0", self.u0)

    @property
    def coupling(self) -> float:
        return self.u0

    def kernel_values(self, p, p_prime, params):
        p, p_prime = np.broadcast_arrays(p, p_prime)
        return np.full(p.shape, -self.u0, dtype=float)

    def to_dict(self):
        return {"potential": self.kind, "u0": self.u0}


@dataclass(frozen=True)
class DoubleDelta(PotentialSpec):
    u0: float
    a: float = 0.0

    kind: ClassVar[str] = "double-delta"

    def __post_init__(self):
        _check_coupling("u0", self.u0)
        if not (math.isfinite(self.a) and self.a >= 0):
            raise InvalidParameterError(f"half-separation a must be finite and >= 0, got {self.a!r}")

    @property
    def coupling(self) -> float:
        return self.u0

    def kernel_values(self, p, p_prime, params):
        return -self.u0 * np.cos((self.a / params.hbar) * (np.asarray(p) - np.asarray(p_prime)))

    def to_dict(self):
        return {"potential": self.kind, "u0": self.u0, "a": self.a}


@dataclass(frozen=True)
class CoulombLike(PotentialSpec):
    """1/|x| well with the self-adjoint extension parameter A.

    ``A = +inf`` and ``A = -inf`` are accepted as flags for the analytic endpoints
    delta = 0 and delta = 1; the kernel itself needs a finite A.
    """

    alpha: float
    extension: float = 0.0

    kind: ClassVar[str] = "coulomb"
    real_kernel: ClassVar[bool] = False

    def __post_init__(self):
        _check_coupling("alpha", self.alpha)
        if math.isnan(self.extension):
            raise InvalidParameterError("extension parameter A must be a real number, got nan")

    @property
    def A(self) -> float:
        return self.extension

    @property
    def coupling(self) -> float:
        return self.alpha

    def kernel_values(self, p, p_prime, params):
        if not math.isfinite(self.extension):
            raise InvalidParameterError("the Coulomb kernel needs a finite extension parameter A")
        step = np.heaviside(np.asarray(p_prime, dtype=float) - np.asarray(p, dtype=float), 0.5)
        return -(self.alpha / (2.0 * params.hbar)) * (2j * step - 1j + self.extension)

    def to_dict(self):
        return {"potential": self.kind, "alpha": self.alpha, "A": self.extension}


POTENTIALS: Dict[str, Type[PotentialSpec]] = {
    Delta.kind: Delta,
    DoubleDelta.kind: DoubleDelta,
    CoulombLike.kind: CoulombLike,
}


def potential_from_dict(data: Dict[str, object]) -> PotentialSpec:
    kind = data.get("potential")
    if kind == Delta.kind:
        return Delta(u0=float(data.get("u0", 1.0)))
    if kind == DoubleDelta.kind:
        return DoubleDelta(u0=float(data.get("u0", 1.0)), a=float(data.get("a", 0.0)))
    if kind == CoulombLike.kind:
        return CoulombLike(alpha=float(data.get("alpha", 1.0)), extension=float(data.get("A", 0.0)))
    raise InvalidParameterError(f"unknown potential {kind!r}; expected one of {sorted(POTENTIALS)}")


def kernel(
    spec: PotentialSpec,
    p,
    p_prime,
    params: PhysicalParams,
    deformation: Optional[Deformation] = None,
):
    """U(p, p'). With ``deformation`` given, both momenta are checked against the domain."""
    if deformation is not None:
        deformation.check_momentum(p)
        deformation.check_momentum(p_prime)
    values = spec.kernel_values(p, p_prime, params)
    if np.ndim(values) == 0:
        return complex(values) if not spec.real_kernel else float(values)
    return values


def kernel_matrix(
    spec: PotentialSpec,
    nodes: np.ndarray,
    params: PhysicalParams,
    kernel_fn: Optional[KernelFn] = None,
) -> np.ndarray:
    """U(p_i, p_j) on a set of nodes."""
    nodes = np.asarray(nodes, dtype=float)
    p, p_prime = nodes[:, None], nodes[None, :]
    if kernel_fn is not None:
        return np.asarray(kernel_fn(spec, p, p_prime, params))
    return np.asarray(spec.kernel_values(p, p_prime, params))


def hermiticity_defect(
    spec: PotentialSpec,
    grid,
    params: Optional[PhysicalParams] = None,
    kernel_fn: Optional[KernelFn] = None,
) -> float:
    """max over node pairs of |U(p, p') - conj(U(p', p))|."""
    params = params or PhysicalParams()
    nodes = getattr(grid, "nodes", grid)
    u = kernel_matrix(spec, nodes, params, kernel_fn)
    return float(np.max(np.abs(u - np.conj(u.T))))
