import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

from tqdm import tqdm

from src import __version__
from src.config import Config
from src.errors import ConfigError
from src.models.core import BoundState, Wavefunction
from src.models.potentials import KernelFn
from src.models.records import MetaRecord, ResultRecord, RunConfig, StateRecord, SweepResult, SweepSpec
from src.services import oracle as nystrom
from src.services.analytic import (
    delta_energy_expansion,
    solve_coulomb,
    solve_delta,
    solve_double_delta,
)
from src.services.numerics import fit_power_series
from src.services.validation import ValidationReport, run_validation

logger = logging.getLogger(__name__)

# ---------------------------------------------------
#  BOUND-STATE SERVICE
# ---------------------------------------------------
#  One entry point per front-end operation (solve, oracle, sweep, validate),
#  shared by the click commands and the Flask blueprints.
# ---------------------------------------------------


class BoundStateService:
    def __init__(self):
        # Potential registry: analytic solver + parameter catalog
        self.solvers = {
            "delta": self._create_delta_solver(),
            "double-delta": self._create_double_delta_solver(),
            "coulomb": self._create_coulomb_solver(),
        }

    # ---------------------------------------------------
    #  SOLVER DEFINITIONS
    # ---------------------------------------------------
    def _create_delta_solver(self):
        def run(config: RunConfig):
            solution = solve_delta(config.u0, config.deformation(), config.params())
            return solution.states, solution.wavefunctions, {}

        return {
            "name": "Delta well",
            "parameters": ["u0"],
            "description": "V(x) = -2 pi hbar U0 delta(x); exactly one bound state",
            "run": run,
        }

    def _create_double_delta_solver(self):
        def run(config: RunConfig):
            solution = solve_double_delta(
                config.u0,
                config.a,
                config.deformation(),
                config.params(),
                root_tol=config.root_tol,
                quad_tol=config.quad_tol,
            )
            even, odd = solution.state("even"), solution.state("odd")
            derived = {
                "integer_separation": solution.integer_separation,
                "odd_state_exists": solution.odd_state_exists,
                "splitting": (odd.energy - even.energy) if odd is not None else None,
            }
            return solution.states, solution.wavefunctions, derived

        return {
            "name": "Double delta well",
            "parameters": ["u0", "a"],
            "description": "V(x) = -pi hbar U0 [delta(x-a) + delta(x+a)]; one even and at most one odd state",
            "run": run,
        }

    def _create_coulomb_solver(self):
        def run(config: RunConfig):
            solution = solve_coulomb(config.alpha, config.A, config.n_states, config.deformation(), config.params())
            derived = {"delta": solution.delta, "alpha0": solution.alpha0, "phi0": solution.phi0_per_state}
            return solution.states, solution.wavefunctions, derived

        return {
            "name": "Coulomb-like well",
            "parameters": ["alpha", "A"],
            "description": "1/|x| well with self-adjoint extension A; levels m alpha / (hbar q (1 + sqrt(beta) q)) = n + delta",
            "run": run,
        }

    def catalog(self) -> List[Dict[str, Any]]:
        return [
            {"potential": key, "name": s["name"], "parameters": s["parameters"], "description": s["description"]}
            for key, s in self.solvers.items()
        ]

    # ---------------------------------------------------
    #  HELPERS
    # ---------------------------------------------------
    def _analytic(self, config: RunConfig):
        solver = self.solvers.get(config.potential)
        if solver is None:
            raise ConfigError(f"unknown potential {config.potential!r}")
        return solver["run"](config)

    @staticmethod
    def _derived(config: RunConfig, extra: Dict[str, Any]) -> Dict[str, Any]:
        deformation = config.deformation()
        data = {
            "p_max": deformation.p_max,
            "minimal_length": deformation.minimal_length(config.params()),
        }
        data.update(extra)
        return data

    @staticmethod
    def _meta(grid: Optional[int], started: float, timestamp: bool) -> MetaRecord:
        return MetaRecord(
            version=__version__,
            grid=grid,
            seconds=(time.perf_counter() - started) if timestamp else None,
        )

    # ---------------------------------------------------
    #  SOLVE
    # ---------------------------------------------------
    def solve(self, config: RunConfig, timestamp: bool = True) -> ResultRecord:
        started = time.perf_counter()
        states, _, extra = self._analytic(config)
        records = [
            StateRecord(label=s.label, energy=s.energy, q=s.q, residual=s.residual) for s in states
        ]
        logger.info("solve finished", extra={"potential": config.potential, "states": len(records)})
        return ResultRecord(
            config=config.echo(),
            states=records,
            derived=self._derived(config, extra),
            meta=self._meta(None, started, timestamp),
        )

    # ---------------------------------------------------
    #  ORACLE
    # ---------------------------------------------------
    def oracle(
        self,
        config: RunConfig,
        timestamp: bool = True,
        kernel_fn: Optional[KernelFn] = None,
        convergence: bool = True,
    ) -> ResultRecord:
        """Nystrom spectrum, matched state by state against the analytic solution."""
        started = time.perf_counter()
        spec = config.potential_spec()
        deformation, params = config.deformation(), config.params()
        hamiltonian = nystrom.build_hamiltonian(
            spec,
            deformation,
            params,
            config.grid,
            grid_scale=config.grid_scale,
            step_rule=config.step_rule,
            kernel_fn=kernel_fn,
        )
        spectrum = nystrom.bound_states(hamiltonian, config.n_states, convergence=convergence)

        analytic_states: List[BoundState] = []
        wavefunctions: List[Wavefunction] = []
        extra: Dict[str, Any] = {}
        if spec.coupling > 0:
            analytic_states, wavefunctions, extra = self._analytic(config)

        records = []
        for i, found in enumerate(spectrum.bound_states):
            estimate = spectrum.convergence_estimate[i]
            if i < len(analytic_states):
                state, wavefunction = analytic_states[i], wavefunctions[i]
                records.append(
                    StateRecord(
                        label=state.label,
                        energy=state.energy,
                        q=state.q,
                        residual=nystrom.residual(hamiltonian, wavefunction, state.energy),
                        oracle_energy=found.energy,
                        deviation=abs(found.energy - state.energy) / abs(state.energy),
                        convergence=estimate,
                    )
                )
            else:
                records.append(
                    StateRecord(
                        label=f"oracle-{i}",
                        energy=found.energy,
                        q=math.sqrt(-2.0 * params.m * found.energy),
                        oracle_energy=found.energy,
                        convergence=estimate,
                    )
                )

        extra = dict(extra, oracle_states=len(spectrum.bound_states), hermitian_defect=hamiltonian.hermitian_defect)
        logger.info("oracle finished", extra={"potential": config.potential, "grid": config.grid, "states": len(records)})
        return ResultRecord(
            config=config.echo(),
            states=records,
            derived=self._derived(config, extra),
            meta=self._meta(config.grid, started, timestamp),
        )

    # ---------------------------------------------------
    #  SWEEP
    # ---------------------------------------------------
    def sweep(
        self,
        config: RunConfig,
        sweep: SweepSpec,
        fit: bool = False,
        use_oracle: bool = False,
        timestamp: bool = True,
        progress: bool = False,
    ) -> SweepResult:
        """One record per sweep point, in input order whatever the completion order."""
        if fit and sweep.parameter != "beta":
            raise ConfigError("fit mode estimates coefficients in sqrt(beta); sweep over beta")
        values = sweep.values()
        configs = [config.with_value(sweep.parameter, value) for value in values]
        run = self.oracle if use_oracle else self.solve

        with ThreadPoolExecutor(max_workers=max(1, Config.SWEEP_WORKERS)) as pool:
            iterator = pool.map(lambda c: run(c, timestamp=timestamp), configs)
            records = list(
                tqdm(iterator, total=len(configs), desc=f"sweep {sweep.parameter}", file=sys.stderr, disable=not progress)
            )

        fit_report = self._fit(config, values, records, config.fit_degree) if fit else None
        return SweepResult(sweep=sweep, values=values, records=records, fit=fit_report)

    def _fit(self, config: RunConfig, betas, records, degree: int) -> Dict[str, Any]:
        """Least-squares fit of the ground-state energy in powers of sqrt(beta)."""
        energies = [r.states[0].energy for r in records if r.states]
        if len(energies) != len(betas):
            raise ConfigError("every sweep point needs a bound state for the fit")
        roots = [math.sqrt(b) for b in betas]
        coefficients = [float(c) for c in fit_power_series(roots, energies, degree)]
        report: Dict[str, Any] = {"degree": degree, "coefficients": coefficients[:3], "all_coefficients": coefficients}
        if config.potential == "delta":
            expected = delta_energy_expansion(config.u0, config.params())
            report["expected"] = list(expected)
            report["relative_error"] = [abs(c - e) / abs(e) for c, e in zip(coefficients[:3], expected)]
        return report

    # ---------------------------------------------------
    #  VALIDATE
    # ---------------------------------------------------
    def validate(self, quick: bool = False, fault: Optional[str] = None) -> ValidationReport:
        return run_validation(quick=quick, fault=fault)


# ---------------------------------------------------
#  GLOBAL INSTANCE
# ---------------------------------------------------
minlen_solver = BoundStateService()
