# src/services/numerics.py
"""Numerical machinery shared by the analytic solvers and the oracle.

Grids are Gauss-Legendre rules in a reference variable ``x`` in (-1, 1), mapped to
momentum either affinely (``gauss_legendre``) or through the tangent map
(``tangent_grid``). Every grid keeps its reference nodes and Jacobian so that
cumulative integration, differentiation and interpolation can work on the
Legendre expansion in ``x``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import legendre as L
from numpy.polynomial import Polynomial
from scipy import linalg, optimize
from scipy.special import roots_legendre

from src.errors import InvalidParameterError, NonHermitianError

logger = logging.getLogger(__name__)

__all__ = [
    "QuadratureGrid",
    "RootResult",
    "gauss_legendre",
    "tangent_grid",
    "cumulative_integral",
    "cumulative_matrix",
    "differentiate",
    "interpolate",
    "find_root_bracketed",
    "hermitian_defect",
    "eigh",
    "eigh_pencil",
    "lowest_eigenvalue",
    "fit_power_series",
]


# ---------------------------------------------------
#  QUADRATURE GRIDS
# ---------------------------------------------------
@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    nodes: np.ndarray
    weights: np.ndarray
    reference_nodes: np.ndarray
    reference_weights: np.ndarray
    jacobian: np.ndarray
    domain: Tuple[float, float]
    to_reference: Callable[[np.ndarray], np.ndarray]

    @property
    def order(self) -> int:
        return int(self.nodes.size)

    def integrate(self, samples) -> complex:
        samples = np.asarray(samples)
        if samples.shape != self.nodes.shape:
            raise InvalidParameterError(
                f"expected {self.order} samples, got {samples.shape[0] if samples.ndim else 0}"
            )
        value = np.sum(self.weights * samples)
        return complex(value) if np.iscomplexobj(value) else float(value)


def _frozen(*arrays):
    for array in arrays:
        array.setflags(write=False)


@lru_cache(maxsize=32)
def _legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Read-only n-point Gauss-Legendre nodes and weights on [-1, 1], shared between grids."""
    x, w = roots_legendre(n)
    _frozen(x, w)
    return x, w


def gauss_legendre(domain: Tuple[float, float], n: int) -> QuadratureGrid:
    """Gauss-Legendre rule with ``n`` nodes mapped affinely onto a finite ``domain``.

    The rule is open, so nodes never sit on the endpoints where tan^2 diverges.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if n < 2:
        raise InvalidParameterError(f"Gauss-Legendre order must be >= 2, got {n}")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidParameterError("Gauss-Legendre needs a finite domain; use tangent_grid for the real line")
    if not hi > lo:
        raise InvalidParameterError(f"empty domain ({lo}, {hi})")

    x, w = _legendre_rule(n)
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    nodes = mid + half * x
    weights = half * w
    jacobian = np.full(n, half)
    _frozen(x, w, nodes, weights, jacobian)

    def to_reference(p):
        return (np.asarray(p, dtype=float) - mid) / half

    return QuadratureGrid(nodes, weights, x, w, jacobian, (lo, hi), to_reference)


def tangent_grid(beta: float, scale: float, n: int) -> QuadratureGrid:
    """Gauss-Legendre in theta in (-pi/2, pi/2) mapped by tan(sqrt(beta) p) = sqrt(beta) scale tan(theta).

    At beta = 0 the map is p = scale tan(theta) on the whole real line. Half the
    nodes land in |p| < scale, where a bound state with decay parameter ``scale``
    carries its weight.
    """
    if n < 2:
        raise InvalidParameterError(f"grid order must be >= 2, got {n}")
    if not scale > 0:
        raise InvalidParameterError(f"grid scale must be positive, got {scale!r}")
    if beta < 0:
        raise InvalidParameterError(f"beta must be >= 0, got {beta!r}")

    x, w = _legendre_rule(n)
    theta = 0.5 * math.pi * x
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    sqrt_beta = math.sqrt(beta)
    s = sqrt_beta * scale

    if beta == 0:
        nodes = scale * np.tan(theta)
        domain = (-math.inf, math.inf)
    else:
        nodes = np.arctan2(s * sin_t, cos_t) / sqrt_beta
        p_max = math.pi / (2.0 * sqrt_beta)
        domain = (-p_max, p_max)

    jacobian = 0.5 * math.pi * scale / (cos_t ** 2 + s * s * sin_t ** 2)
    weights = w * jacobian
    _frozen(x, w, nodes, weights, jacobian)

    def to_reference(p):
        p = np.asarray(p, dtype=float)
        if beta == 0:
            theta_p = np.arctan(p / scale)
        else:
            theta_p = np.arctan2(np.sin(sqrt_beta * p), s * np.cos(sqrt_beta * p))
        return 2.0 * theta_p / math.pi

    return QuadratureGrid(nodes, weights, x, w, jacobian, domain, to_reference)


# ---------------------------------------------------
#  SPECTRAL CUMULATIVE INTEGRATION / DIFFERENTIATION
# ---------------------------------------------------
@lru_cache(maxsize=16)
def cumulative_matrix(n: int) -> np.ndarray:
    """Matrix S with (S f)_k = integral from -1 to x_k of the Legendre interpolant of f.

    x_k are the n-point Gauss-Legendre nodes. S satisfies w_i S_ij + w_j S_ji = w_i w_j
    exactly in exact arithmetic. The returned array is read-only and shared.
    """
    x, w = _legendre_rule(n)
    vander = L.legvander(x, n)                      # P_0 .. P_n at the nodes
    k = np.arange(n)
    integrals = np.empty((n, n))
    integrals[:, 0] = x + 1.0
    integrals[:, 1:] = (vander[:, 2:n + 1] - vander[:, 0:n - 1]) / (2 * k[1:] + 1)
    projection = ((2 * k + 1) / 2.0)[:, None] * vander[:, :n].T * w[None, :]
    s = integrals @ projection
    s.setflags(write=False)
    return s


def _legendre_coefficients(grid: QuadratureGrid, samples: np.ndarray) -> np.ndarray:
    n = grid.order
    vander = L.legvander(grid.reference_nodes, n - 1)
    k = np.arange(n)
    return ((2 * k + 1) / 2.0) * (vander.T @ (grid.reference_weights * samples))


def _check_samples(grid: QuadratureGrid, samples) -> np.ndarray:
    samples = np.asarray(samples)
    if samples.shape != (grid.order,):
        raise InvalidParameterError(
            f"samples must align with the {grid.order} grid nodes, got shape {samples.shape}"
        )
    return samples


def cumulative_integral(grid: QuadratureGrid, samples) -> np.ndarray:
    """Running integral of ``samples`` from the lower endpoint.

    Returns ``order + 1`` entries: entry k < order is the integral up to node k,
    the last entry is the integral over the whole domain (the quadrature sum).
    """
    samples = _check_samples(grid, samples)
    running = cumulative_matrix(grid.order) @ (samples * grid.jacobian)
    total = np.sum(grid.weights * samples)
    return np.concatenate([running, [total]])


def differentiate(grid: QuadratureGrid, samples) -> np.ndarray:
    """d/dp of the Legendre interpolant of ``samples`` at the grid nodes."""
    samples = _check_samples(grid, samples)
    if np.iscomplexobj(samples):
        return differentiate(grid, samples.real) + 1j * differentiate(grid, samples.imag)
    coefficients = _legendre_coefficients(grid, samples)
    derivative = L.legval(grid.reference_nodes, L.legder(coefficients))
    return derivative / grid.jacobian


def interpolate(grid: QuadratureGrid, samples, p) -> np.ndarray:
    """Evaluate the Legendre interpolant of ``samples`` at momenta ``p``."""
    samples = _check_samples(grid, samples)
    if np.iscomplexobj(samples):
        return interpolate(grid, samples.real, p) + 1j * interpolate(grid, samples.imag, p)
    coefficients = _legendre_coefficients(grid, samples)
    return L.legval(grid.to_reference(p), coefficients)


# ---------------------------------------------------
#  ROOT FINDING
# ---------------------------------------------------
@dataclass(frozen=True)
class RootResult:
    """Outcome of a bracketed root search.

    Attributes:
        root: The root, or None when the bracket shows no sign change.
        converged: Whether Brent's method met the tolerance.
        bracketed: Whether f(lo) and f(hi) had opposite signs.
        iterations: Number of iterations used.
        function_calls: Number of function evaluations.
    """

    root: Optional[float]
    converged: bool
    bracketed: bool
    iterations: int = 0
    function_calls: int = 0


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    maxiter: int = 200,
) -> RootResult:
    """Root of ``f`` in [lo, hi] by Brent's method; never evaluates outside the bracket.

    A bracket without a sign change yields ``RootResult(root=None, bracketed=False)``
    instead of an exception.
    """
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return RootResult(lo, True, True, 0, 2)
    if f_hi == 0:
        return RootResult(hi, True, True, 0, 2)
    if np.sign(f_lo) == np.sign(f_hi) or not (np.isfinite(f_lo) and np.isfinite(f_hi)):
        logger.debug("no sign change on [%g, %g]: f=%g, %g", lo, hi, f_lo, f_hi)
        return RootResult(None, False, False, 0, 2)

    root, info = optimize.brentq(f, lo, hi, xtol=tol, maxiter=maxiter, full_output=True, disp=False)
    if not info.converged:
        logger.warning("brent did not converge on [%g, %g]: %s", lo, hi, info.flag)
    return RootResult(float(root), bool(info.converged), True, int(info.iterations), int(info.function_calls) + 2)


# ---------------------------------------------------
#  DENSE HERMITIAN EIGENPROBLEMS
# ---------------------------------------------------
def hermitian_defect(matrix: np.ndarray) -> float:
    """max |H - H^dagger| relative to max |H| (absolute when H = 0)."""
    matrix = np.asarray(matrix)
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    defect = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    return defect / scale if scale > 0 else defect


def _symmetrized(matrix, hermitian_tol: float, name: str = "matrix") -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameterError(f"{name} must be square, got shape {matrix.shape}")
    defect = hermitian_defect(matrix)
    if defect > hermitian_tol:
        raise NonHermitianError(f"{name} is not Hermitian: relative defect {defect:.3e}", defect)
    return 0.5 * (matrix + matrix.conj().T)


def eigh(matrix, hermitian_tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix.

    The input is symmetrized as (H + H^dagger)/2 after the defect check; complex
    matrices are handled natively by LAPACK.
    """
    h = _symmetrized(matrix, hermitian_tol)
    values, vectors = linalg.eigh(h)
    return values, vectors


def eigh_pencil(a, b, hermitian_tol: float = 1e-12, subset_by_value=None) -> Tuple[np.ndarray, np.ndarray]:
    """Solve the Hermitian-definite pencil a v = lambda b v (b positive definite).

    Eigenvectors are b-orthonormal. ``subset_by_value`` is passed to LAPACK as the
    half-open interval (lo, hi]; an empty selection returns empty arrays.
    """
    a = _symmetrized(a, hermitian_tol, "a")
    b = _symmetrized(b, hermitian_tol, "b")
    if subset_by_value is None:
        return linalg.eigh(a, b)
    try:
        return linalg.eigh(a, b, subset_by_value=subset_by_value)
    except (ValueError, linalg.LinAlgError) as exc:
        logger.debug("subset pencil solve failed (%s), falling back to the full spectrum", exc)
        values, vectors = linalg.eigh(a, b)
        lo, hi = subset_by_value
        keep = (values > lo) & (values <= hi)
        return values[keep], vectors[:, keep]


def lowest_eigenvalue(matrix, hermitian_tol: float = 1e-12) -> float:
    h = _symmetrized(matrix, hermitian_tol)
    return float(linalg.eigh(h, eigvals_only=True, subset_by_index=[0, 0])[0])


# ---------------------------------------------------
#  FITS
# ---------------------------------------------------
def fit_power_series(x, y, degree: int) -> np.ndarray:
    """Least-squares polynomial coefficients of y(x), ascending powers."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.size <= degree:
        raise InvalidParameterError(f"a degree-{degree} fit needs more than {degree} points, got {x.size}")
    coefficients = Polynomial.fit(x, y, degree).convert().coef
    return np.pad(coefficients, (0, degree + 1 - coefficients.size))
