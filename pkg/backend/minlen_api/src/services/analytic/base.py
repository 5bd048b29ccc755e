# src/services/analytic/base.py
"""Pieces shared by the closed-form solvers."""

from __future__ import annotations

import logging
import math

import numpy as np

from src.config import Config
from src.errors import InvalidParameterError
from src.models.core import Deformation, PhysicalParams, Wavefunction
from src.services.numerics import QuadratureGrid, tangent_grid

logger = logging.getLogger(__name__)

# grid norm may drift this far from 1 before the printed constant is replaced
NORM_RECHECK_TOL = 1e-6
# exactly normalized states are resampled until their grid norm is this close to 1
GRID_NORM_TOL = 1e-10
MAX_GRID_REFINEMENTS = 6


def require_positive(name: str, value: float):
    if not (math.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{name} must be > 0 for a bound state, got {value!r}")


def decay_from_product(k: float, deformation: Deformation) -> float:
    """Positive root q of q (1 + sqrt(beta) q) = k.

    Written as 2k / (1 + sqrt(1 + 4 sqrt(beta) k)), which equals
    (-1 + sqrt(1 + 4 sqrt(beta) k)) / (2 sqrt(beta)) without the cancellation at small beta.
    """
    if deformation.beta == 0:
        return k
    return 2.0 * k / (1.0 + math.sqrt(1.0 + 4.0 * deformation.sqrt_beta * k))


def denominator(p, q: float, deformation: Deformation):
    """tan^2(sqrt(beta) p) + beta q^2, or p^2 + q^2 when undeformed."""
    p = np.asarray(p, dtype=float)
    if deformation.beta == 0:
        return p * p + q * q
    return np.tan(deformation.sqrt_beta * p) ** 2 + deformation.beta * q * q


def lorentzian_constant(q: float, deformation: Deformation) -> float:
    """Constant C making C / denominator(p) unit-normalized.

    sqrt(2/pi) beta (1 + c) q^(3/2) / sqrt(1 + 2c) with c = sqrt(beta) q;
    sqrt(2/pi) q^(3/2) at beta = 0.
    """
    if deformation.beta == 0:
        return math.sqrt(2.0 / math.pi) * q ** 1.5
    c = deformation.sqrt_beta * q
    return math.sqrt(2.0 / math.pi) * deformation.beta * (1.0 + c) * q ** 1.5 / math.sqrt(1.0 + 2.0 * c)


def state_grid(q: float, deformation: Deformation, nodes: int = None) -> QuadratureGrid:
    return tangent_grid(deformation.beta, q, nodes or Config.WAVEFUNCTION_NODES)


def checked_wavefunction(evaluator_for, constant, q, deformation, nodes=None, what="state"):
    """Sample ``evaluator_for(constant)`` on the state grid and re-verify its norm.

    When the grid norm is off by more than NORM_RECHECK_TOL the constant is rescaled
    by the quadrature result and the discrepancy is logged.
    """
    grid = state_grid(q, deformation, nodes)
    wavefunction = Wavefunction.sampled(evaluator_for(constant), grid, constant, deformation)
    norm = wavefunction.norm()
    if abs(norm - 1.0) > NORM_RECHECK_TOL:
        logger.warning(
            "normalization constant replaced by quadrature",
            extra={"state": what, "printed_constant": float(np.real(constant)), "grid_norm": norm},
        )
        constant = constant / norm
        wavefunction = Wavefunction.sampled(evaluator_for(constant), grid, constant, deformation)
    return wavefunction


def refined_wavefunction(evaluator, constant, q, deformation, nodes=None, tol=GRID_NORM_TOL, what="state"):
    """Sample ``evaluator`` on state grids of growing order until the grid norm is within ``tol`` of 1.

    Each refinement doubles both the order and the tangent scale, so the node count in
    |p| < q stays fixed while oscillating tails are resolved further out. ``constant``
    must already be exact; it is never rescaled here.
    """
    if tol is None:
        return Wavefunction.sampled(evaluator, state_grid(q, deformation, nodes), constant, deformation)
    nodes = nodes or Config.WAVEFUNCTION_NODES
    for level in range(MAX_GRID_REFINEMENTS + 1):
        factor = 2 ** level
        grid = tangent_grid(deformation.beta, q * factor, nodes * factor)
        wavefunction = Wavefunction.sampled(evaluator, grid, constant, deformation)
        drift = abs(wavefunction.norm() - 1.0)
        if drift <= tol:
            break
    else:
        logger.warning(
            "state grid norm not converged",
            extra={"state": what, "nodes": grid.order, "grid_norm_drift": drift},
        )
    logger.debug("state grid", extra={"state": what, "nodes": grid.order, "grid_norm_drift": drift})
    return wavefunction
