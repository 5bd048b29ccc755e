# src/services/analytic/g_function.py
"""The overlap integral g(alpha) of the double-delta problem and its relatives.

    g(alpha) = integral of cos(2 alpha p) / (tan^2(sqrt(beta) p) + beta q^2) dp over (-p_max, p_max)

More generally ``resolvent_moment`` integrates cos(2 alpha p) / (2 m T(p) + q^2)^k; k = 1 gives
beta g(alpha) and k = 2 the normalization integrals of the double-delta eigenfunctions.
"""

from __future__ import annotations

import logging
import math
import warnings

import numpy as np
from scipy import integrate

from src.config import Config
from src.errors import InvalidParameterError, QuadratureError
from src.models.core import Deformation

logger = logging.getLogger(__name__)

__all__ = ["g_function_closed", "g_function_numeric", "resolvent_moment"]


def _require_deformed(deformation: Deformation, what: str):
    if deformation.beta == 0:
        raise InvalidParameterError(f"{what} is defined for beta > 0 only; use the undeformed limit path at beta = 0")


def g_function_closed(n: int, q: float, deformation: Deformation) -> float:
    """g at alpha = sqrt(beta) n.

    g(0) = pi / (beta q (1 + c)),  g(sqrt(beta) n) = pi (1 - c)^(n-1) / (beta q (1 + c)^(n+1)),  c = sqrt(beta) q.
    """
    _require_deformed(deformation, "g_function_closed")
    if n < 0 or int(n) != n:
        raise InvalidParameterError(f"n must be a non-negative integer, got {n!r}")
    if not q > 0:
        raise InvalidParameterError(f"q must be positive, got {q!r}")
    n = int(n)
    beta, c = deformation.beta, deformation.sqrt_beta * q
    if n == 0:
        return math.pi / (beta * q * (1.0 + c))
    return math.pi * (1.0 - c) ** (n - 1) / (beta * q * (1.0 + c) ** (n + 1))


def _breakpoints(c: float):
    """[0, c, 10c, 100c, ...] capped at pi/2; the integrand is peaked on the scale c."""
    points = [0.0]
    edge = c
    while edge < 0.5 * math.pi:
        points.append(edge)
        edge *= 10.0
    points.append(0.5 * math.pi)
    return points


def resolvent_moment(
    alpha: float,
    q: float,
    deformation: Deformation,
    power: int = 1,
    epsabs: float = None,
    epsrel: float = None,
) -> float:
    """Integral of cos(2 alpha p) / (2 m T(p) + q^2)^power over the momentum domain.

    With t = sqrt(beta) p and c = sqrt(beta) q this is
    beta^power (2 / sqrt(beta)) * integral_0^(pi/2) cos(omega t) [cos^2 t / (sin^2 t + c^2 cos^2 t)]^power dt,
    omega = 2 alpha / sqrt(beta), integrated piecewise with QUADPACK's cosine weight.
    At beta = 0 the closed forms for power 1 and 2 are used.
    """
    if not q > 0:
        raise InvalidParameterError(f"q must be positive, got {q!r}")
    if power < 1:
        raise InvalidParameterError(f"power must be >= 1, got {power!r}")
    alpha = abs(alpha)

    if deformation.beta == 0:
        decay = math.exp(-2.0 * alpha * q)
        if power == 1:
            return math.pi / q * decay
        if power == 2:
            return math.pi / (2.0 * q ** 3) * (1.0 + 2.0 * alpha * q) * decay
        raise InvalidParameterError("undeformed resolvent moments are available for power 1 and 2 only")

    epsabs = Config.QUAD_EPSABS if epsabs is None else epsabs
    epsrel = Config.QUAD_EPSREL if epsrel is None else epsrel
    sqrt_beta = deformation.sqrt_beta
    c = sqrt_beta * q
    omega = 2.0 * alpha / sqrt_beta
    prefactor = deformation.beta ** power * 2.0 / sqrt_beta

    def profile(t):
        cos2 = math.cos(t) ** 2
        return (cos2 / (math.sin(t) ** 2 + c * c * cos2)) ** power

    points = _breakpoints(c)
    pieces = len(points) - 1
    piece_abs = epsabs / (prefactor * pieces)
    total, error = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in zip(points[:-1], points[1:]):
            if omega == 0:
                value, err = integrate.quad(profile, lo, hi, epsabs=piece_abs, epsrel=epsrel, limit=200)
            else:
                value, err = integrate.quad(
                    profile, lo, hi, weight="cos", wvar=omega, epsabs=piece_abs, epsrel=epsrel, limit=200
                )
            total += value
            error += err

    result, achieved = prefactor * total, prefactor * error
    logger.debug(
        "resolvent moment",
        extra={"alpha": alpha, "q": q, "beta": deformation.beta, "power": power, "value": result, "error": achieved},
    )
    if not np.isfinite(result) or achieved > max(100.0 * epsabs, 1e-8 * abs(result)):
        raise QuadratureError(
            f"resolvent moment did not converge (alpha={alpha}, q={q}, beta={deformation.beta}): "
            f"estimated error {achieved:.3e}",
            achieved_error=achieved,
        )
    return result


def g_function_numeric(alpha: float, q: float, deformation: Deformation, epsabs: float = None) -> float:
    """g(alpha) by adaptive quadrature; error target max(epsabs, 1e-12 |g|), epsabs defaulting to QUAD_EPSABS."""
    _require_deformed(deformation, "g_function_numeric")
    if not q > 0:
        raise InvalidParameterError(f"q must be positive, got {q!r}")
    beta = deformation.beta
    # g scales like 1/(beta q), so the absolute target is relaxed to 1e-12 relative
    epsabs = Config.QUAD_EPSABS if epsabs is None else epsabs
    target = max(epsabs, 1e-12 * g_function_closed(0, q, deformation))
    return resolvent_moment(alpha, q, deformation, power=1, epsabs=target * beta) / beta
