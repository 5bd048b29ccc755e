import math

import numpy as np
import pytest

from src.errors import DomainError, InvalidParameterError
from src.models.core import Deformation, PhysicalParams
from src.services.analytic import delta_energy_closed, delta_energy_expansion, solve_delta
from src.services.numerics import fit_power_series


def test_undeformed_energy(params):
    solution = solve_delta(1.0, Deformation(0.0), params)
    assert solution.state.energy == pytest.approx(-2.0 * math.pi ** 2, rel=1e-12)
    assert solution.state.label == "single"


def test_deformed_decay_parameter(params):
    solution = solve_delta(1.0, Deformation(0.01), params)
    expected = (-1.0 + math.sqrt(1.0 + 0.8 * math.pi)) / 0.2
    assert solution.state.q == pytest.approx(expected, rel=1e-14)
    assert solution.state.energy == pytest.approx(-expected ** 2 / 2.0, rel=1e-14)
    assert solution.state.residual < 1e-12


def test_tiny_beta_is_stable(params):
    # the naive (-1 + sqrt(1 + 4 sqrt(beta) K)) / (2 sqrt(beta)) loses every digit here
    q = solve_delta(1.0, Deformation(1e-30), params).state.q
    assert q == pytest.approx(2.0 * math.pi, rel=1e-12)


def test_mass_and_hbar_enter_through_the_product():
    params = PhysicalParams(m=2.0, hbar=3.0)
    solution = solve_delta(0.5, Deformation(0.0), params)
    assert solution.state.q == pytest.approx(2.0 * math.pi * 2.0 * 0.5)
    assert solution.state.energy == pytest.approx(-(2.0 * math.pi) ** 2 / 4.0)


@pytest.mark.parametrize("beta", [0.0, 1e-6, 0.01, 1.0])
def test_wavefunction_is_normalized_and_even(beta, params):
    wavefunction = solve_delta(1.0, Deformation(beta), params).wavefunction
    assert abs(wavefunction.norm() - 1.0) < 1e-8
    assert wavefunction.parity_defect(1) < 1e-12 * np.max(np.abs(wavefunction.amplitudes))
    assert wavefunction.is_finite()


def test_wavefunction_domain(params):
    deformation = Deformation(0.25)
    wavefunction = solve_delta(1.0, deformation, params).wavefunction
    with pytest.raises(DomainError):
        wavefunction(deformation.p_max)
    value = wavefunction(deformation.p_max * (1.0 - 1e-13))
    assert np.isfinite(value)
    assert abs(value) < 1e-10


@pytest.mark.parametrize("beta", [1e-2, 0.1, 1.0])
def test_printed_energy_formula(beta, params):
    solution = solve_delta(1.0, Deformation(beta), params)
    assert delta_energy_closed(1.0, Deformation(beta), params) == pytest.approx(solution.state.energy, rel=1e-12)


def test_expansion_coefficients_from_fit(params):
    betas = np.geomspace(1e-8, 1e-5, 8)
    energies = [solve_delta(1.0, Deformation(b), params).state.energy for b in betas]
    coefficients = fit_power_series(np.sqrt(betas), energies, 5)
    for found, expected in zip(coefficients[:3], delta_energy_expansion(1.0, params)):
        assert found == pytest.approx(expected, rel=5e-3)


def test_expansion_values():
    c0, c1, c2 = delta_energy_expansion(1.0)
    assert (c0, c1, c2) == pytest.approx((-2 * math.pi ** 2, 8 * math.pi ** 3, -40 * math.pi ** 4))


@pytest.mark.parametrize("u0", [0.0, -1.0, math.nan])
def test_rejects_non_attractive_coupling(u0, params):
    with pytest.raises(InvalidParameterError):
        solve_delta(u0, Deformation(0.01), params)


def test_to_dict(params):
    data = solve_delta(1.0, Deformation(0.01), params).to_dict()
    assert data["states"][0]["label"] == "single"
    assert data["wavefunctions"][0]["norm"] == pytest.approx(1.0, abs=1e-8)
