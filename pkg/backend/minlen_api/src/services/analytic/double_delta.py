# src/services/analytic/double_delta.py
"""Two delta wells, V(x) = -pi hbar U0 [delta(x - a) + delta(x + a)].

The kernel -U0 cos(alpha (p - p')), alpha = a / hbar, splits the spectrum by parity:

    even   phi(p) = A cos(alpha p) / D(p)      1 - h(q) (1 + rho(q)) = 0
    odd    phi(p) = B sin(alpha p) / D(p)      1 - h(q) (1 - rho(q)) = 0

with D the delta-well denominator, h = pi m U0 / (q (1 + sqrt(beta) q)) and
rho = g(alpha) / g(0). Both spectral functions increase monotonically in q, so each
parity has at most one root; the odd one disappears for shallow or close wells.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from src.config import Config
from src.errors import InvalidParameterError, SolverError
from src.models.core import BoundState, Deformation, PhysicalParams, Wavefunction
from src.services.analytic.base import (
    GRID_NORM_TOL,
    decay_from_product,
    denominator,
    refined_wavefunction,
    require_positive,
)
from src.services.analytic.delta import delta_product
from src.services.analytic.g_function import g_function_closed, g_function_numeric, resolvent_moment
from src.services.numerics import find_root_bracketed

logger = logging.getLogger(__name__)

# lower end of the root bracket relative to q_upper
BRACKET_FLOOR = 1e-6
# a / (hbar sqrt(beta)) closer than this to an integer uses the closed-form g
INTEGER_SEPARATION_TOL = 1e-9

PARITY_SIGN = {"even": 1, "odd": -1}


@dataclass(frozen=True, eq=False)
class DoubleDeltaSolution:
    states: List[BoundState]
    wavefunctions: List[Wavefunction]
    integer_separation: Optional[int]
    varphi_pm: Dict[str, Tuple[complex, complex]]
    u0: float
    a: float
    deformation: Deformation
    params: PhysicalParams
    odd_state_exists: bool = field(default=False)

    def state(self, parity: str) -> Optional[BoundState]:
        for state in self.states:
            if state.label == parity:
                return state
        return None

    def wavefunction(self, parity: str) -> Optional[Wavefunction]:
        for state, wavefunction in zip(self.states, self.wavefunctions):
            if state.label == parity:
                return wavefunction
        return None

    def to_dict(self):
        return {
            "states": [s.to_dict() for s in self.states],
            "integer_separation": self.integer_separation,
            "odd_state_exists": self.odd_state_exists,
        }


def integer_separation(a: float, deformation: Deformation, params: PhysicalParams) -> Optional[int]:
    """n with a = n hbar sqrt(beta), or None when a is not such a multiple (or beta = 0)."""
    if deformation.beta == 0:
        return None
    ratio = a / (params.hbar * deformation.sqrt_beta)
    n = round(ratio)
    if abs(ratio - n) <= INTEGER_SEPARATION_TOL * max(1.0, abs(ratio)):
        return int(n)
    return None


class _SpectralFunctions:
    """h(q), rho(q) and the stable complement 1 - rho(q) for one (U0, a, beta) triple."""

    def __init__(self, u0: float, a: float, deformation: Deformation, params: PhysicalParams, epsabs=None):
        self.u0 = u0
        self.epsabs = epsabs
        self.alpha = a / params.hbar
        self.deformation = deformation
        self.params = params
        self.n = integer_separation(a, deformation, params)

    def h(self, q: float) -> float:
        c = self.deformation.sqrt_beta * q
        return math.pi * self.params.m * self.u0 / (q * (1.0 + c))

    def rho(self, q: float) -> float:
        if self.alpha == 0:
            return 1.0
        if self.deformation.beta == 0:
            return math.exp(-2.0 * self.alpha * q)
        if self.n is not None:
            c = self.deformation.sqrt_beta * q
            return (1.0 - c) ** (self.n - 1) / (1.0 + c) ** self.n
        return g_function_numeric(self.alpha, q, self.deformation, self.epsabs) / g_function_closed(0, q, self.deformation)

    def one_minus_rho(self, q: float) -> float:
        if self.alpha == 0:
            return 0.0
        if self.deformation.beta == 0:
            return -math.expm1(-2.0 * self.alpha * q)
        c = self.deformation.sqrt_beta * q
        if self.n is not None and c < 1.0:
            return -math.expm1((self.n - 1) * math.log1p(-c) - self.n * math.log1p(c))
        return 1.0 - self.rho(q)

    def condition(self, parity: str) -> Callable[[float], float]:
        if parity == "even":
            return lambda q: 1.0 - self.h(q) * (1.0 + self.rho(q))
        return lambda q: 1.0 - self.h(q) * self.one_minus_rho(q)


def _norm_integral(parity: str, q: float, alpha: float, deformation: Deformation) -> float:
    """Integral of cos^2(alpha p) / D^2 (even) or sin^2(alpha p) / D^2 (odd)."""
    r0 = resolvent_moment(0.0, q, deformation, power=2)
    ra = resolvent_moment(alpha, q, deformation, power=2)
    scale = deformation.beta ** 2 if deformation.beta > 0 else 1.0
    return 0.5 * (r0 + PARITY_SIGN[parity] * ra) / scale


def _overlap_integral(parity: str, q: float, alpha: float, deformation: Deformation) -> float:
    """Integral of cos^2(alpha p) / D (even) or sin^2(alpha p) / D (odd)."""
    r0 = resolvent_moment(0.0, q, deformation, power=1)
    ra = resolvent_moment(alpha, q, deformation, power=1)
    scale = deformation.beta if deformation.beta > 0 else 1.0
    return 0.5 * (r0 + PARITY_SIGN[parity] * ra) / scale


def solve_double_delta(
    u0: float,
    a: float,
    deformation: Deformation,
    params: Optional[PhysicalParams] = None,
    nodes: Optional[int] = None,
    root_tol: Optional[float] = None,
    quad_tol: Optional[float] = None,
    grid_norm_tol: Optional[float] = GRID_NORM_TOL,
) -> DoubleDeltaSolution:
    """Even and odd bound states; ``grid_norm_tol=None`` samples wavefunctions on a single grid of ``nodes``."""
    params = params or PhysicalParams()
    require_positive("u0", u0)
    if not (math.isfinite(a) and a >= 0):
        raise InvalidParameterError(f"half-separation a must be finite and >= 0, got {a!r}")
    root_tol = Config.ROOT_TOL if root_tol is None else root_tol

    spectral = _SpectralFunctions(u0, a, deformation, params, quad_tol)
    q_upper = decay_from_product(delta_product(2.0 * u0, params), deformation)
    q_lower = BRACKET_FLOOR * q_upper
    alpha = spectral.alpha

    states: List[BoundState] = []
    wavefunctions: List[Wavefunction] = []
    varphi_pm: Dict[str, Tuple[complex, complex]] = {}

    for parity in ("even", "odd"):
        f = spectral.condition(parity)
        if parity == "even" and a == 0:
            # identical to the single well
            q = decay_from_product(delta_product(u0, params), deformation)
        else:
            result = find_root_bracketed(f, q_lower, q_upper, tol=root_tol)
            if not result.bracketed:
                if parity == "even":
                    raise SolverError(f"no even double-delta root in [{q_lower:.3e}, {q_upper:.3e}]")
                # F_-(q_lower) > 0 means a root, if any, sits below the bracket floor
                logger.warning(
                    "no odd bound state",
                    extra={
                        "u0": u0,
                        "a": a,
                        "beta": deformation.beta,
                        "q_lower": q_lower,
                        "q_upper": q_upper,
                        "condition_at_floor": f(q_lower),
                    },
                )
                continue
            q = result.root
        residual = abs(f(q))
        state = BoundState.from_q(q, params, parity, residual)
        logger.debug("double-delta state", extra={"parity": parity, "q": q, "residual": residual})

        trig = np.cos if parity == "even" else np.sin
        constant = 1.0 / math.sqrt(_norm_integral(parity, q, alpha, deformation))

        def evaluator_for(value, trig=trig, q=q):
            return lambda p: value * trig(alpha * np.asarray(p, dtype=float)) / denominator(p, q, deformation)

        wavefunction = refined_wavefunction(
            evaluator_for(constant), constant, q, deformation, nodes, tol=grid_norm_tol, what=f"double-delta {parity}"
        )
        overlap = wavefunction.norm_constant * _overlap_integral(parity, q, alpha, deformation)
        if parity == "even":
            varphi_pm[parity] = (complex(overlap), complex(overlap))
        else:
            varphi_pm[parity] = (complex(1j * overlap), complex(-1j * overlap))

        states.append(state)
        wavefunctions.append(wavefunction)

    return DoubleDeltaSolution(
        states=states,
        wavefunctions=wavefunctions,
        integer_separation=spectral.n,
        varphi_pm=varphi_pm,
        u0=u0,
        a=a,
        deformation=deformation,
        params=params,
        odd_state_exists=any(s.label == "odd" for s in states),
    )


def undeformed_double_delta_roots(u0: float, a: float, params: Optional[PhysicalParams] = None) -> Dict[str, float]:
    """Roots of q = pi m U0 (1 +- exp(-2 q a / hbar)), the beta -> 0 limit; odd omitted when absent."""
    params = params or PhysicalParams()
    solution = solve_double_delta(u0, a, Deformation(0.0), params, nodes=64, grid_norm_tol=None)
    return {state.label: state.q for state in solution.states}
