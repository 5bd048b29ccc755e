# src/services/oracle.py
"""Nystrom discretization of the deformed momentum-space Schrodinger equation.

    T(p) phi(p) + integral U(p, p') phi(p') dp' = E phi(p)

On a quadrature grid with weights w the symmetrized matrix

    H_ij = T(p_i) delta_ij + sqrt(w_i) U(p_i, p_j) sqrt(w_j)

acts on v_i = sqrt(w_i) phi(p_i); its negative eigenvalues approximate the bound states.
For the Coulomb kernel the step function is integrated exactly against the Legendre
interpolant ("spectral" step rule) instead of being sampled ("midpoint" rule).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional

import numpy as np

from src.config import Config
from src.errors import ConfigError, InvalidParameterError, NonHermitianError
from src.models.core import Deformation, PhysicalParams, Wavefunction, deformed_kinetic, momentum_domain
from src.models.potentials import CoulombLike, KernelFn, PotentialSpec, kernel_matrix
from src.services.numerics import (
    QuadratureGrid,
    cumulative_matrix,
    eigh,
    eigh_pencil,
    gauss_legendre,
    lowest_eigenvalue,
    tangent_grid,
)

logger = logging.getLogger(__name__)

MIN_ORDER = 16
STEP_RULES = ("spectral", "midpoint")
METHODS = ("pencil", "direct")
# a reflection defect below this labels the eigenvector even or odd
PARITY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class DiscretizedHamiltonian:
    grid: QuadratureGrid
    kinetic: np.ndarray
    coupling: np.ndarray
    potential: PotentialSpec
    deformation: Deformation
    params: PhysicalParams
    hermitian_defect: float
    grid_scale: Optional[float] = None
    step_rule: str = "spectral"
    kernel_fn: Optional[KernelFn] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return self.grid.order

    @cached_property
    def matrix(self) -> np.ndarray:
        """The dense H = diag(T) + W."""
        return np.diag(self.kinetic).astype(self.coupling.dtype) + self.coupling

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.kinetic * vector + self.coupling @ vector


@dataclass(frozen=True, eq=False)
class OracleState:
    energy: float
    vector: np.ndarray
    amplitudes: np.ndarray
    parity: Optional[str]
    parity_defect: float
    grid: QuadratureGrid = field(repr=False, default=None)

    def to_dict(self):
        return {"energy": self.energy, "parity": self.parity, "parity_defect": self.parity_defect}


@dataclass(frozen=True, eq=False)
class OracleSpectrum:
    bound_states: List[OracleState]
    grid_order: int
    convergence_estimate: List[Optional[float]]
    hamiltonian: DiscretizedHamiltonian = field(repr=False)

    @property
    def energies(self) -> List[float]:
        return [s.energy for s in self.bound_states]

    def to_dict(self):
        return {
            "grid": self.grid_order,
            "states": [s.to_dict() for s in self.bound_states],
            "convergence_estimate": self.convergence_estimate,
        }


# ---------------------------------------------------
#  ASSEMBLY
# ---------------------------------------------------
def build_hamiltonian(
    spec: PotentialSpec,
    deformation: Deformation,
    params: Optional[PhysicalParams] = None,
    n: Optional[int] = None,
    *,
    grid_scale: Optional[float] = None,
    step_rule: str = "spectral",
    kernel_fn: Optional[KernelFn] = None,
) -> DiscretizedHamiltonian:
    """Assemble the Nystrom Hamiltonian on n Gauss-Legendre nodes.

    ``grid_scale`` switches from the plain rule on (-p_max, p_max) to a tangent grid
    with that scale. ``kernel_fn`` replaces the potential's kernel (fault injection).
    """
    params = params or PhysicalParams()
    n = Config.GRID_ORDER if n is None else int(n)
    if deformation.beta == 0:
        raise ConfigError(
            "the oracle needs beta > 0 (finite momentum domain); "
            "use the analytic solvers for the undeformed problem"
        )
    if n < MIN_ORDER:
        raise ConfigError(f"grid order must be >= {MIN_ORDER}, got {n}")
    if step_rule not in STEP_RULES:
        raise ConfigError(f"unknown step rule {step_rule!r}; expected one of {STEP_RULES}")

    if grid_scale is None:
        grid = gauss_legendre(momentum_domain(deformation), n)
    else:
        grid = tangent_grid(deformation.beta, grid_scale, n)

    kinetic = deformed_kinetic(grid.nodes, deformation, params)
    root_w = np.sqrt(grid.weights)

    if isinstance(spec, CoulombLike) and step_rule == "spectral" and kernel_fn is None:
        coupling = _coulomb_spectral_block(spec, grid, root_w, params)
    else:
        u = kernel_matrix(spec, grid.nodes, params, kernel_fn)
        coupling = root_w[:, None] * u * root_w[None, :]
        if not np.iscomplexobj(coupling):
            coupling = coupling.astype(float)

    defect = float(np.max(np.abs(coupling - coupling.conj().T)))
    logger.debug(
        "assembled hamiltonian",
        extra={"potential": spec.kind, "order": n, "beta": deformation.beta, "hermitian_defect": defect},
    )
    return DiscretizedHamiltonian(
        grid=grid,
        kinetic=kinetic,
        coupling=coupling,
        potential=spec,
        deformation=deformation,
        params=params,
        hermitian_defect=defect,
        grid_scale=grid_scale,
        step_rule=step_rule,
        kernel_fn=kernel_fn,
    )


def _coulomb_spectral_block(spec: CoulombLike, grid: QuadratureGrid, root_w: np.ndarray, params: PhysicalParams):
    """-(alpha / 2 hbar) [A sqrt(w) sqrt(w)^T - 2i Ksk].

    D_ij = sqrt(w_i) S_ij J_j / sqrt(w_j) discretizes the running integral; D + D^T = sqrt(w) sqrt(w)^T,
    so only its antisymmetric part Ksk survives and the block is Hermitian exactly.
    """
    if not np.isfinite(spec.extension):
        raise InvalidParameterError("the oracle needs a finite extension parameter A")
    s = cumulative_matrix(grid.order)
    d = root_w[:, None] * s * (grid.jacobian / root_w)[None, :]
    skew = 0.5 * (d - d.T)
    outer = np.outer(root_w, root_w)
    return -(spec.alpha / (2.0 * params.hbar)) * (spec.extension * outer - 2j * skew)


# ---------------------------------------------------
#  EIGENSOLVE
# ---------------------------------------------------
def _phase_aligned(vector: np.ndarray) -> np.ndarray:
    """Scale so the entry of largest modulus is real positive."""
    pivot = vector[np.argmax(np.abs(vector))]
    return vector * (np.conj(pivot) / abs(pivot))


def _parity(vector: np.ndarray):
    aligned = _phase_aligned(vector)
    mirrored = aligned[::-1]
    even = float(np.linalg.norm(mirrored - aligned))
    odd = float(np.linalg.norm(mirrored + aligned))
    defect = min(even, odd)
    if defect > PARITY_TOL:
        return None, defect
    return ("even" if even <= odd else "odd"), defect


def _negative_spectrum_pencil(h: DiscretizedHamiltonian, hermitian_tol: float):
    """Negative eigenpairs of K + W through the bounded pencil G^2 chi = nu (I + G W G) chi.

    G = (K + tau)^(-1/2) and E = 1/nu - tau. Both pencil matrices stay O(1) even where
    the kinetic diagonal is huge, so the small eigenvalues keep their relative accuracy.
    """
    w_min = lowest_eigenvalue(h.coupling, hermitian_tol)
    tau = max(-2.0 * w_min, 1.0)
    g = 1.0 / np.sqrt(h.kinetic + tau)
    a = np.diag(g * g)
    b = np.eye(h.order) + g[:, None] * h.coupling * g[None, :]
    nu, chi = eigh_pencil(a, b, hermitian_tol, subset_by_value=(1.0 / tau, np.inf))
    energies = 1.0 / nu - tau
    vectors = g[:, None] * chi
    order = np.argsort(energies)
    energies, vectors = energies[order], vectors[:, order]
    keep = energies < -1e-12 * tau
    return energies[keep], vectors[:, keep]


def _negative_spectrum_direct(h: DiscretizedHamiltonian, hermitian_tol: float):
    energies, vectors = eigh(h.matrix, hermitian_tol)
    keep = energies < 0
    return energies[keep], vectors[:, keep]


def _solve(h: DiscretizedHamiltonian, k: Optional[int], method: str, hermitian_tol: float) -> List[OracleState]:
    if method not in METHODS:
        raise ConfigError(f"unknown eigensolver method {method!r}; expected one of {METHODS}")
    if h.hermitian_defect > hermitian_tol:
        raise NonHermitianError(f"hamiltonian Hermitian defect {h.hermitian_defect:.3e}", h.hermitian_defect)

    solver = _negative_spectrum_pencil if method == "pencil" else _negative_spectrum_direct
    energies, vectors = solver(h, hermitian_tol)
    if k is not None:
        energies, vectors = energies[:k], vectors[:, :k]

    root_w = np.sqrt(h.grid.weights)
    states = []
    for energy, vector in zip(energies, vectors.T):
        vector = vector / np.linalg.norm(vector)
        parity, defect = _parity(vector)
        amplitudes = vector / root_w
        states.append(OracleState(float(energy), vector, amplitudes, parity, defect, h.grid))
    return states


def bound_states(
    h: DiscretizedHamiltonian,
    k: Optional[int] = None,
    *,
    method: str = "pencil",
    convergence: bool = True,
    hermitian_tol: Optional[float] = None,
) -> OracleSpectrum:
    """Up to k negative eigenvalues with eigenvectors, ascending.

    The convergence estimate re-solves the same problem at N/2 and reports
    |E(N) - E(N/2)| per state (None where the coarse grid lost the state).
    """
    hermitian_tol = Config.HERMITIAN_TOL if hermitian_tol is None else hermitian_tol
    states = _solve(h, k, method, hermitian_tol)

    estimates: List[Optional[float]] = [None] * len(states)
    if convergence and states and h.order // 2 >= MIN_ORDER:
        coarse = build_hamiltonian(
            h.potential,
            h.deformation,
            h.params,
            h.order // 2,
            grid_scale=h.grid_scale,
            step_rule=h.step_rule,
            kernel_fn=h.kernel_fn,
        )
        coarse_states = _solve(coarse, k, method, hermitian_tol)
        for i, state in enumerate(states):
            if i < len(coarse_states):
                estimates[i] = abs(state.energy - coarse_states[i].energy)

    logger.debug(
        "oracle spectrum",
        extra={"potential": h.potential.kind, "order": h.order, "energies": [s.energy for s in states]},
    )
    return OracleSpectrum(states, h.order, estimates, h)


# ---------------------------------------------------
#  COMPARISONS WITH ANALYTIC EIGENPAIRS
# ---------------------------------------------------
def residual(h: DiscretizedHamiltonian, wavefunction: Wavefunction, energy: float) -> float:
    """||(H - E) v|| / ||v|| with v = sqrt(w) phi sampled at the grid nodes."""
    vector = np.sqrt(h.grid.weights) * wavefunction(h.grid.nodes)
    return float(np.linalg.norm(h.apply(vector) - energy * vector) / np.linalg.norm(vector))


def compare_eigenvector(state: OracleState, wavefunction: Wavefunction) -> float:
    """Weighted L2 distance between an oracle eigenvector and an analytic wavefunction.

    Both are phase-aligned (largest entry real positive) before the comparison.
    """
    grid = state.grid
    analytic = _phase_aligned(np.asarray(wavefunction(grid.nodes), dtype=complex))
    discrete = _phase_aligned(np.asarray(state.amplitudes, dtype=complex))
    return float(np.sqrt(np.sum(grid.weights * np.abs(analytic - discrete) ** 2)))
