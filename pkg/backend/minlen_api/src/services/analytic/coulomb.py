# src/services/analytic/coulomb.py
"""One-dimensional Coulomb-like well with a self-adjoint extension parameter A.

The momentum kernel -(alpha / 2 hbar)(2i theta(p' - p) - i + A) turns the
Schrodinger equation into a first-order equation for the running integral of phi.
Its solution is

    phi(p) = C / D(p) * exp(-i (2 m alpha / hbar) L(p)),   L(p) = integral_0^p dp' / (2 m T(p') + q^2)

and the boundary values of the running integral give sin(phi0 - delta pi) = 0 with
phi0 = pi m alpha / (hbar q (1 + sqrt(beta) q)) and delta = arccot(A) / pi, i.e.

    m alpha / (hbar q (1 + sqrt(beta) q)) = n + delta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from src.errors import InvalidParameterError
from src.models.core import BoundState, Deformation, PhysicalParams, Wavefunction
from src.services.analytic.base import (
    checked_wavefunction,
    decay_from_product,
    denominator,
    lorentzian_constant,
    require_positive,
)
from src.services.numerics import cumulative_integral, differentiate, interpolate

logger = logging.getLogger(__name__)

# below this |1 - c^2| the phase integral uses its c = 1 limit
_UNIT_C_TOL = 1e-6


def extension_delta(A: float) -> float:
    """delta = arccot(A) / pi on the (0, pi) branch; A = +inf gives 0 and A = -inf gives 1."""
    if math.isnan(A):
        raise InvalidParameterError("extension parameter A must be a real number")
    if A == math.inf:
        return 0.0
    if A == -math.inf:
        return 1.0
    return (0.5 * math.pi - math.atan(A)) / math.pi


@dataclass(frozen=True, eq=False)
class CoulombSolution:
    states: List[BoundState]
    wavefunctions: List[Wavefunction]
    delta: float
    alpha0: float
    phi0_per_state: List[float]
    alpha: float
    A: float
    deformation: Deformation
    params: PhysicalParams

    def to_dict(self):
        return {
            "states": [s.to_dict() for s in self.states],
            "delta": self.delta,
            "alpha0": self.alpha0,
            "phi0": list(self.phi0_per_state),
        }


def coulomb_phase(p, q: float, deformation: Deformation):
    """L(p) = integral_0^p dp' / (2 m T(p') + q^2), continuous on the open domain.

    beta > 0:  sqrt(beta) [arctan2(sin t, c cos t) / c - t] / (1 - c^2),  t = sqrt(beta) p, c = sqrt(beta) q
    beta = 0:  arctan(p / q) / q
    """
    p = np.asarray(p, dtype=float)
    if deformation.beta == 0:
        return np.arctan(p / q) / q
    sqrt_beta = deformation.sqrt_beta
    t = sqrt_beta * p
    c = sqrt_beta * q
    if abs(1.0 - c * c) < _UNIT_C_TOL:
        return sqrt_beta * (0.5 * t + 0.25 * np.sin(2.0 * t))
    return sqrt_beta * (np.arctan2(np.sin(t), c * np.cos(t)) / c - t) / (1.0 - c * c)


def _decay_parameter(level: float, alpha: float, deformation: Deformation, params: PhysicalParams) -> float:
    return decay_from_product(params.m * alpha / (params.hbar * level), deformation)


def solve_coulomb(
    alpha: float,
    A: float,
    n_max: int,
    deformation: Deformation,
    params: Optional[PhysicalParams] = None,
    nodes: Optional[int] = None,
) -> CoulombSolution:
    """The lowest ``n_max`` levels. Labels start at n = 1 when delta = 0 (the n = 0 level collapses)."""
    params = params or PhysicalParams()
    require_positive("alpha", alpha)
    if n_max < 1 or int(n_max) != n_max:
        raise InvalidParameterError(f"n_max must be a positive integer, got {n_max!r}")

    delta = extension_delta(A)
    first = 1 if delta == 0 else 0
    kappa = 2.0 * params.m * alpha / params.hbar
    alpha0 = 2.0 * params.m * deformation.beta * alpha / params.hbar

    states: List[BoundState] = []
    wavefunctions: List[Wavefunction] = []
    phi0_per_state: List[float] = []
    for n in range(first, first + int(n_max)):
        level = n + delta
        q = _decay_parameter(level, alpha, deformation, params)
        c = deformation.sqrt_beta * q
        phi0 = math.pi * params.m * alpha / (params.hbar * q * (1.0 + c))
        residual = abs(phi0 / math.pi - level)
        states.append(BoundState.from_q(q, params, n, residual))
        phi0_per_state.append(phi0)

        def evaluator_for(constant, q=q):
            return lambda p: constant / denominator(p, q, deformation) * np.exp(
                -1j * kappa * coulomb_phase(p, q, deformation)
            )

        wavefunctions.append(
            checked_wavefunction(evaluator_for, lorentzian_constant(q, deformation), q, deformation, nodes, what=f"coulomb n={n}")
        )
        logger.debug("coulomb level", extra={"n": n, "q": q, "phi0": phi0, "residual": residual})

    return CoulombSolution(
        states=states,
        wavefunctions=wavefunctions,
        delta=delta,
        alpha0=alpha0,
        phi0_per_state=phi0_per_state,
        alpha=alpha,
        A=A,
        deformation=deformation,
        params=params,
    )


def coulomb_full_integral(solution: CoulombSolution, index: int) -> float:
    """Closed-form integral of phi over the domain: (2C / alpha0) sin(phi0).

    At beta = 0 the same quantity is hbar C sin(phi0) / (m alpha).
    """
    params = solution.params
    constant = float(np.real(solution.wavefunctions[index].norm_constant))
    phi0 = solution.phi0_per_state[index]
    if solution.deformation.beta == 0:
        return params.hbar * constant * math.sin(phi0) / (params.m * solution.alpha)
    return 2.0 * constant * math.sin(phi0) / solution.alpha0


@dataclass(frozen=True)
class CoulombEnergyReport:
    n: int
    delta: float
    quantized_energy: float
    printed_energy: float
    squared_energy: float
    printed_difference: float
    squared_relative_difference: float
    sign_inconsistent: bool

    @property
    def flagged(self) -> bool:
        """True when the printed (unsquared) formula disagrees with the quantization condition."""
        return self.sign_inconsistent or abs(self.printed_difference) > 1e-12 * abs(self.quantized_energy)

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "delta": self.delta,
            "quantized_energy": self.quantized_energy,
            "printed_energy": self.printed_energy,
            "squared_energy": self.squared_energy,
            "printed_difference": self.printed_difference,
            "squared_relative_difference": self.squared_relative_difference,
            "sign_inconsistent": self.sign_inconsistent,
            "flagged": self.flagged,
        }


def coulomb_closed_form_energy_check(
    alpha: float,
    A: float,
    deformation: Deformation,
    params: Optional[PhysicalParams] = None,
    n: int = 0,
) -> CoulombEnergyReport:
    """Compare -q_n^2 / 2m with the printed E_n = -(1 - sqrt(1 + x)) / (8 m beta).

    x = 4 m alpha sqrt(beta) / (hbar (n + delta)). Only the squared form
    -(1 - sqrt(1 + x))^2 / (8 m beta) reproduces the quantization condition; the
    printed one is positive.
    """
    params = params or PhysicalParams()
    require_positive("alpha", alpha)
    if deformation.beta == 0:
        raise InvalidParameterError("the printed Coulomb energy formula needs beta > 0")
    delta = extension_delta(A)
    level = n + delta
    if level <= 0:
        raise InvalidParameterError(f"n + delta must be positive, got n={n}, delta={delta}")

    m, beta = params.m, deformation.beta
    q = _decay_parameter(level, alpha, deformation, params)
    quantized = -q * q / (2.0 * m)
    x = 4.0 * m * alpha * deformation.sqrt_beta / (params.hbar * level)
    root = 1.0 - math.sqrt(1.0 + x)
    printed = -root / (8.0 * m * beta)
    squared = -root * root / (8.0 * m * beta)
    return CoulombEnergyReport(
        n=n,
        delta=delta,
        quantized_energy=quantized,
        printed_energy=printed,
        squared_energy=squared,
        printed_difference=printed - quantized,
        squared_relative_difference=abs(squared - quantized) / abs(quantized),
        sign_inconsistent=(printed > 0) != (quantized > 0),
    )


# ---------------------------------------------------
#  POSITION OPERATOR AND ITS INVERSE
# ---------------------------------------------------
def inverse_x_functional(wavefunction: Wavefunction, A: float, params: Optional[PhysicalParams] = None) -> complex:
    """c[phi] = ((i + A) / 2 hbar) * integral of phi over the domain."""
    params = params or PhysicalParams()
    if not math.isfinite(A):
        raise InvalidParameterError("c[phi] needs a finite extension parameter A")
    total = complex(wavefunction.grid.integrate(wavefunction.amplitudes))
    return (1j + A) / (2.0 * params.hbar) * total


def _derived(wavefunction: Wavefunction, samples: np.ndarray) -> Wavefunction:
    grid = wavefunction.grid
    samples = np.asarray(samples, dtype=complex)
    samples.setflags(write=False)
    return Wavefunction(
        evaluator=lambda p: interpolate(grid, samples, p),
        grid=grid,
        amplitudes=samples,
        norm_constant=None,
        deformation=wavefunction.deformation,
    )


def apply_inverse_X(
    wavefunction: Wavefunction,
    A: float,
    deformation: Deformation,
    params: Optional[PhysicalParams] = None,
) -> Wavefunction:
    """(1/X) phi(p) = -(i / hbar) integral_{-p_max}^{p} phi + c[phi], on the wavefunction's grid."""
    params = params or PhysicalParams()
    if wavefunction.deformation != deformation:
        raise InvalidParameterError("wavefunction was sampled for a different deformation")
    running = cumulative_integral(wavefunction.grid, wavefunction.amplitudes)[:-1]
    shift = inverse_x_functional(wavefunction, A, params)
    return _derived(wavefunction, -1j / params.hbar * running + shift)


def apply_x(wavefunction: Wavefunction, params: Optional[PhysicalParams] = None) -> Wavefunction:
    """X phi = i hbar d phi / dp, by Legendre differentiation on the wavefunction's grid."""
    params = params or PhysicalParams()
    return _derived(wavefunction, 1j * params.hbar * differentiate(wavefunction.grid, wavefunction.amplitudes))
