import math

import numpy as np
import pytest

from src.errors import InvalidParameterError
from src.models.core import Deformation
from src.services.analytic import (
    apply_inverse_X,
    apply_x,
    coulomb_closed_form_energy_check,
    coulomb_full_integral,
    coulomb_phase,
    extension_delta,
    inverse_x_functional,
    solve_coulomb,
)


@pytest.mark.parametrize(
    "A, delta",
    [(0.0, 0.5), (1.0, 0.25), (-1.0, 0.75), (math.inf, 0.0), (-math.inf, 1.0)],
)
def test_extension_delta(A, delta):
    assert extension_delta(A) == pytest.approx(delta, abs=1e-15)


def test_extension_delta_decreases_with_A():
    values = [extension_delta(A) for A in np.linspace(-10.0, 10.0, 21)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[0] > 0.95 and values[-1] < 0.05


def test_undeformed_levels(params):
    solution = solve_coulomb(1.0, 0.0, 3, Deformation(0.0), params)
    assert [s.label for s in solution.states] == [0, 1, 2]
    for n, state in enumerate(solution.states):
        assert state.energy == pytest.approx(-1.0 / (2.0 * (n + 0.5) ** 2), rel=1e-14)


@pytest.mark.parametrize("beta", [0.005, 0.02])
@pytest.mark.parametrize("A", [-2.0, 0.0, 1.0])
def test_quantization_condition(beta, A, params):
    solution = solve_coulomb(1.0, A, 5, Deformation(beta), params)
    delta = extension_delta(A)
    for n, state in enumerate(solution.states):
        q = state.q
        assert q * (1.0 + math.sqrt(beta) * q) == pytest.approx(1.0 / (n + delta), rel=1e-13)
        assert state.residual < 1e-12


def test_delta_zero_and_one_coincide(params):
    for beta in (0.0, 0.005, 0.02):
        upper = solve_coulomb(1.0, math.inf, 5, Deformation(beta), params)
        lower = solve_coulomb(1.0, -math.inf, 5, Deformation(beta), params)
        assert [s.label for s in upper.states] == [1, 2, 3, 4, 5]
        assert [s.label for s in lower.states] == [0, 1, 2, 3, 4]
        for s0, s1 in zip(upper.states, lower.states):
            assert abs(s0.energy - s1.energy) <= 1e-12 * abs(s1.energy)


def test_wavefunctions_normalized(params):
    solution = solve_coulomb(1.0, 1.0, 5, Deformation(0.02), params)
    for wavefunction in solution.wavefunctions:
        assert abs(wavefunction.norm() - 1.0) < 1e-8
        assert wavefunction.is_finite()


@pytest.mark.parametrize("beta, A", [(0.0, 0.0), (0.005, -2.0), (0.02, 1.0)])
def test_lowest_states_are_orthogonal(beta, A, params):
    solution = solve_coulomb(1.0, A, 4, Deformation(beta), params)
    wavefunctions = solution.wavefunctions
    assert len(wavefunctions) == 4
    for i, first in enumerate(wavefunctions):
        for second in wavefunctions[i + 1:]:
            assert abs(first.inner(second)) < 1e-6


def test_phase_is_odd_and_continuous():
    deformation = Deformation(0.02)
    p = np.linspace(-0.999, 0.999, 2001) * deformation.p_max
    phase = coulomb_phase(p, 0.7, deformation)
    np.testing.assert_allclose(phase, -phase[::-1], atol=1e-14)
    assert np.max(np.abs(np.diff(phase))) < 0.05


def test_phase_undeformed_limit():
    p = np.array([-3.0, 0.5, 2.0])
    np.testing.assert_allclose(coulomb_phase(p, 2.0, Deformation(0.0)), np.arctan(p / 2.0) / 2.0)


@pytest.mark.parametrize("beta", [0.0, 0.02])
def test_full_integral(beta, params):
    solution = solve_coulomb(1.0, 1.0, 3, Deformation(beta), params)
    for index, wavefunction in enumerate(solution.wavefunctions):
        numeric = wavefunction.grid.integrate(wavefunction.amplitudes)
        closed = coulomb_full_integral(solution, index)
        assert abs(numeric - closed) < 1e-6 * max(1.0, abs(closed))


def test_printed_energy_is_flagged(params):
    for alpha in (0.5, 1.0, 2.0, 4.0):
        for beta in (1e-3, 5e-3, 0.02, 0.1, 0.5):
            report = coulomb_closed_form_energy_check(alpha, 0.0, Deformation(beta), params)
            assert report.squared_relative_difference < 1e-12
            assert report.flagged
            assert report.printed_energy > 0 > report.quantized_energy


def test_printed_energy_needs_deformation(params):
    with pytest.raises(InvalidParameterError):
        coulomb_closed_form_energy_check(1.0, 0.0, Deformation(0.0), params)


def test_inverse_position_operator(params):
    deformation = Deformation(0.02)
    solution = solve_coulomb(1.0, 0.0, 3, deformation, params)
    for wavefunction in solution.wavefunctions:
        weights = wavefunction.grid.weights
        forward = apply_x(apply_inverse_X(wavefunction, 0.0, deformation, params), params)
        backward = apply_inverse_X(apply_x(wavefunction, params), 0.0, deformation, params)
        for composed in (forward, backward):
            distance = np.sqrt(np.sum(weights * np.abs(composed.amplitudes - wavefunction.amplitudes) ** 2))
            assert distance < 1e-6


def test_inverse_x_functional(params):
    solution = solve_coulomb(1.0, 0.0, 1, Deformation(0.02), params)
    wavefunction = solution.wavefunctions[0]
    total = coulomb_full_integral(solution, 0)
    assert inverse_x_functional(wavefunction, 2.0, params) == pytest.approx((1j + 2.0) / 2.0 * total, rel=1e-8)
    with pytest.raises(InvalidParameterError):
        inverse_x_functional(wavefunction, math.inf, params)


def test_rejects_bad_input(params):
    with pytest.raises(InvalidParameterError):
        solve_coulomb(0.0, 0.0, 3, Deformation(0.01), params)
    with pytest.raises(InvalidParameterError):
        solve_coulomb(1.0, 0.0, 0, Deformation(0.01), params)
