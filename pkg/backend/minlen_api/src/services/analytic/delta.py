# src/services/analytic/delta.py
"""Single attractive delta well, V(x) = -2 pi hbar U0 delta(x).

The momentum-space equation reduces to phi(p) = const / (tan^2(sqrt(beta) p) + beta q^2)
with the quantization condition q (1 + sqrt(beta) q) = 2 pi m U0: one bound state.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.models.core import BoundState, Deformation, PhysicalParams, Wavefunction
from src.services.analytic.base import (
    checked_wavefunction,
    decay_from_product,
    denominator,
    lorentzian_constant,
    require_positive,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DeltaSolution:
    state: BoundState
    wavefunction: Wavefunction
    u0: float
    deformation: Deformation
    params: PhysicalParams

    @property
    def states(self) -> List[BoundState]:
        return [self.state]

    @property
    def wavefunctions(self) -> List[Wavefunction]:
        return [self.wavefunction]

    def to_dict(self):
        return {
            "states": [self.state.to_dict()],
            "wavefunctions": [self.wavefunction.to_dict()],
        }


def delta_product(u0: float, params: PhysicalParams) -> float:
    """Right-hand side 2 pi m U0 of the quantization condition."""
    return 2.0 * math.pi * params.m * u0


def solve_delta(
    u0: float,
    deformation: Deformation,
    params: Optional[PhysicalParams] = None,
    nodes: Optional[int] = None,
) -> DeltaSolution:
    params = params or PhysicalParams()
    require_positive("u0", u0)

    k = delta_product(u0, params)
    q = decay_from_product(k, deformation)
    residual = abs(q * (1.0 + deformation.sqrt_beta * q) - k)
    state = BoundState.from_q(q, params, "single", residual)
    logger.debug("delta bound state", extra={"u0": u0, "beta": deformation.beta, "q": q, "residual": residual})

    def evaluator_for(constant):
        return lambda p: constant / denominator(p, q, deformation)

    wavefunction = checked_wavefunction(
        evaluator_for, lorentzian_constant(q, deformation), q, deformation, nodes, what="delta"
    )
    return DeltaSolution(state, wavefunction, u0, deformation, params)


def delta_energy_closed(u0: float, deformation: Deformation, params: Optional[PhysicalParams] = None) -> float:
    """E = -(1 + 4 pi m U0 sqrt(beta) - sqrt(1 + 8 pi m U0 sqrt(beta))) / (4 m beta) as printed.

    Loses relative accuracy to cancellation once 8 pi m U0 sqrt(beta) is small;
    solve_delta is the accurate path.
    """
    params = params or PhysicalParams()
    require_positive("u0", u0)
    m = params.m
    if deformation.beta == 0:
        return -2.0 * math.pi ** 2 * m * u0 ** 2
    x = 4.0 * math.pi * m * u0 * deformation.sqrt_beta
    return -(1.0 + x - math.sqrt(1.0 + 2.0 * x)) / (4.0 * m * deformation.beta)


def delta_energy_expansion(u0: float, params: Optional[PhysicalParams] = None) -> Tuple[float, float, float]:
    """Coefficients (c0, c1, c2) of E = c0 + c1 sqrt(beta) + c2 beta + O(beta^(3/2))."""
    params = params or PhysicalParams()
    require_positive("u0", u0)
    m, pi = params.m, math.pi
    return (
        -2.0 * pi ** 2 * m * u0 ** 2,
        8.0 * pi ** 3 * m ** 2 * u0 ** 3,
        -40.0 * pi ** 4 * m ** 3 * u0 ** 4,
    )
