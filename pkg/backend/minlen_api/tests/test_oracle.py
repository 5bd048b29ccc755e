import numpy as np
import pytest

from src.errors import ConfigError, InvalidParameterError, NonHermitianError
from src.models.core import Deformation
from src.models.potentials import CoulombLike, Delta, DoubleDelta
from src.services import oracle as nystrom
from src.services.analytic import solve_coulomb, solve_delta


def _relative(value, reference):
    return abs(value - reference) / abs(reference)


def test_rejects_undeformed_space(params):
    with pytest.raises(ConfigError, match="beta > 0"):
        nystrom.build_hamiltonian(Delta(1.0), Deformation(0.0), params, 400)


def test_rejects_small_grid(params):
    with pytest.raises(ConfigError):
        nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, nystrom.MIN_ORDER - 1)


def test_rejects_unknown_step_rule(params):
    with pytest.raises(ConfigError):
        nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, 64, step_rule="trapezoid")


def test_rejects_unknown_method(params):
    h = nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, 64)
    with pytest.raises(ConfigError):
        nystrom.bound_states(h, method="lanczos")


def test_coulomb_needs_finite_extension(params):
    with pytest.raises(InvalidParameterError):
        nystrom.build_hamiltonian(CoulombLike(1.0, float("inf")), Deformation(0.02), params, 64)


def test_delta_matches_analytic(params):
    deformation = Deformation(0.01)
    solution = solve_delta(1.0, deformation, params)
    h = nystrom.build_hamiltonian(Delta(1.0), deformation, params, 400)
    spectrum = nystrom.bound_states(h)

    assert len(spectrum.bound_states) == 1
    found = spectrum.bound_states[0]
    assert _relative(found.energy, solution.state.energy) < 1e-10
    assert found.parity == "even"
    assert nystrom.compare_eigenvector(found, solution.wavefunction) < 1e-6
    assert nystrom.residual(h, solution.wavefunction, solution.state.energy) < 1e-6


def test_direct_and_pencil_agree(params):
    h = nystrom.build_hamiltonian(Delta(1.0), Deformation(0.1), params, 200)
    pencil = nystrom.bound_states(h, convergence=False)
    direct = nystrom.bound_states(h, method="direct", convergence=False)
    assert len(pencil.bound_states) == len(direct.bound_states) == 1
    assert _relative(pencil.energies[0], direct.energies[0]) < 1e-8


def test_deviation_shrinks_with_grid(params):
    deformation = Deformation(1e-3)
    exact = solve_delta(1.0, deformation, params).state.energy
    deviations = []
    for n in (16, 32):
        spectrum = nystrom.bound_states(
            nystrom.build_hamiltonian(Delta(1.0), deformation, params, n), convergence=False
        )
        deviations.append(_relative(spectrum.energies[0], exact))
    assert deviations[1] < deviations[0]


def test_convergence_estimate_reported(params):
    h = nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, 64)
    spectrum = nystrom.bound_states(h)
    assert spectrum.grid_order == 64
    assert spectrum.convergence_estimate[0] is not None
    assert spectrum.convergence_estimate[0] >= 0.0

    small = nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, 20)
    assert nystrom.bound_states(small).convergence_estimate == [None]


def _ground_energies(beta, orders, params):
    deformation = Deformation(beta)
    return [
        nystrom.bound_states(
            nystrom.build_hamiltonian(Delta(1.0), deformation, params, n), 1, convergence=False
        ).energies[0]
        for n in orders
    ]


@pytest.mark.parametrize("beta", [1e-3, 1e-2, 0.1])
def test_ground_energy_decreases_as_grid_doubles(beta, params):
    energies = _ground_energies(beta, (64, 128, 256, 512), params)
    for coarse, fine in zip(energies, energies[1:]):
        assert fine <= coarse + 1e-10


def test_residual_detects_shifted_energy(params):
    deformation = Deformation(0.01)
    solution = solve_delta(1.0, deformation, params)
    h = nystrom.build_hamiltonian(Delta(1.0), deformation, params, 400)
    assert nystrom.residual(h, solution.wavefunction, solution.state.energy) < 1e-6
    assert nystrom.residual(h, solution.wavefunction, solution.state.energy + 0.1) >= 0.05


def test_zero_separation_double_delta_is_single_delta(params):
    deformation = Deformation(0.04)
    single = nystrom.bound_states(nystrom.build_hamiltonian(Delta(1.0), deformation, params, 200))
    double = nystrom.bound_states(nystrom.build_hamiltonian(DoubleDelta(1.0, 0.0), deformation, params, 200))
    assert len(double.bound_states) == 1
    assert abs(double.energies[0] - single.energies[0]) <= 1e-12 * abs(single.energies[0])


def test_zero_coupling_has_no_bound_states(params):
    h = nystrom.build_hamiltonian(Delta(0.0), Deformation(0.01), params, 64)
    spectrum = nystrom.bound_states(h)
    assert spectrum.bound_states == []
    assert spectrum.convergence_estimate == []


def test_double_delta_parities(params):
    deformation = Deformation(0.04)
    a = 2 * params.hbar * deformation.sqrt_beta
    spectrum = nystrom.bound_states(nystrom.build_hamiltonian(DoubleDelta(1.0, a), deformation, params, 400))
    assert [s.parity for s in spectrum.bound_states] == ["even", "odd"]


@pytest.mark.parametrize("step_rule", nystrom.STEP_RULES)
def test_coulomb_block_is_hermitian(step_rule, params):
    h = nystrom.build_hamiltonian(CoulombLike(1.0, 1.0), Deformation(0.02), params, 200, step_rule=step_rule)
    assert h.hermitian_defect < 1e-12
    assert np.iscomplexobj(h.matrix)


def test_coulomb_matches_analytic(params):
    deformation = Deformation(0.02)
    solution = solve_coulomb(1.0, 1.0, 5, deformation, params)
    scale = solution.states[2].q
    h = nystrom.build_hamiltonian(CoulombLike(1.0, 1.0), deformation, params, 400, grid_scale=scale)
    spectrum = nystrom.bound_states(h, 5, convergence=False)

    assert len(spectrum.bound_states) == 5
    for state, found in zip(solution.states, spectrum.bound_states):
        assert _relative(found.energy, state.energy) < 1e-4


def test_coulomb_residual_detects_wrong_sign(params):
    deformation = Deformation(0.02)
    solution = solve_coulomb(1.0, 0.0, 1, deformation, params)
    state, wavefunction = solution.states[0], solution.wavefunctions[0]
    h = nystrom.build_hamiltonian(CoulombLike(1.0, 0.0), deformation, params, 400, grid_scale=state.q)

    good = nystrom.residual(h, wavefunction, state.energy)
    conjugated = nystrom.residual(h, lambda p: np.conj(wavefunction(p)), state.energy)
    assert good < 1e-3
    assert conjugated > 10 * good


def test_non_hermitian_kernel_is_rejected(params):
    def lopsided(spec, p, p_prime, params):
        return spec.kernel_values(p, p_prime, params) + 0.1 * np.asarray(p) * np.ones_like(p_prime)

    h = nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, 64, kernel_fn=lopsided)
    assert h.hermitian_defect > 1e-3
    with pytest.raises(NonHermitianError) as info:
        nystrom.bound_states(h)
    assert info.value.exit_code == 3


def test_flipped_kernel_binds_nothing(params):
    def flipped(spec, p, p_prime, params):
        return -spec.kernel_values(p, p_prime, params)

    h = nystrom.build_hamiltonian(Delta(1.0), Deformation(0.01), params, 64, kernel_fn=flipped)
    assert nystrom.bound_states(h).bound_states == []


@pytest.mark.slow
def test_delta_full_grid(params):
    for beta in (1e-3, 1e-2, 0.1):
        deformation = Deformation(beta)
        solution = solve_delta(1.0, deformation, params)
        spectrum = nystrom.bound_states(
            nystrom.build_hamiltonian(Delta(1.0), deformation, params, 2000), convergence=False
        )
        assert _relative(spectrum.energies[0], solution.state.energy) < 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("beta", [1e-3, 1e-2, 0.1])
def test_ground_energy_decreases_on_large_grids(beta, params):
    energies = _ground_energies(beta, (512, 1024, 2000), params)
    for coarse, fine in zip(energies, energies[1:]):
        assert fine <= coarse + 1e-10


@pytest.mark.slow
@pytest.mark.parametrize("A", [-2.0, 0.0, 1.0])
def test_coulomb_plain_grid(A, params):
    deformation = Deformation(0.02)
    solution = solve_coulomb(1.0, A, 5, deformation, params)
    spectrum = nystrom.bound_states(
        nystrom.build_hamiltonian(CoulombLike(1.0, A), deformation, params, 1500), 5, convergence=False
    )
    for state, found in zip(solution.states, spectrum.bound_states):
        assert _relative(found.energy, state.energy) < 1e-4
