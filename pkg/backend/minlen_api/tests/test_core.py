import math

import numpy as np
import pytest

from src.errors import DomainError, InvalidParameterError
from src.models.core import BoundState, Deformation, PhysicalParams, deformed_kinetic, momentum_domain


def test_cutoff_and_minimal_length():
    deformation = Deformation(0.25)
    assert deformation.p_max == pytest.approx(math.pi)
    assert deformation.minimal_length(PhysicalParams(hbar=2.0)) == pytest.approx(1.0)
    assert momentum_domain(deformation) == (-deformation.p_max, deformation.p_max)


def test_undeformed_domain_is_unbounded():
    deformation = Deformation(0.0)
    assert not deformation.is_deformed
    assert deformation.p_max == math.inf
    assert deformation.minimal_length(PhysicalParams()) == 0.0


@pytest.mark.parametrize("beta", [-1e-3, math.nan, math.inf])
def test_rejects_bad_beta(beta):
    with pytest.raises(InvalidParameterError):
        Deformation(beta)


@pytest.mark.parametrize("field", ["m", "hbar"])
def test_rejects_non_positive_constants(field):
    with pytest.raises(InvalidParameterError):
        PhysicalParams(**{field: 0.0})


def test_kinetic_reduces_to_free_particle():
    params = PhysicalParams(m=2.0)
    assert deformed_kinetic(3.0, Deformation(0.0), params) == pytest.approx(9.0 / 4.0)
    # tan(x)^2 / beta -> p^2 for small sqrt(beta) p
    assert deformed_kinetic(1e-3, Deformation(1e-6), params) == pytest.approx(0.25e-6, rel=1e-9)


def test_kinetic_scalar_and_array():
    deformation = Deformation(1.0)
    value = deformed_kinetic(0.5, deformation, PhysicalParams())
    assert isinstance(value, float)
    assert value == pytest.approx(math.tan(0.5) ** 2 / 2.0)
    values = deformed_kinetic(np.array([-0.5, 0.0, 0.5]), deformation, PhysicalParams())
    np.testing.assert_allclose(values, [value, 0.0, value])


def test_kinetic_outside_domain_raises():
    deformation = Deformation(1.0)
    with pytest.raises(DomainError):
        deformed_kinetic(deformation.p_max, deformation, PhysicalParams())
    with pytest.raises(DomainError):
        deformed_kinetic(np.array([0.0, -2.0]), deformation, PhysicalParams())


def test_kinetic_near_cutoff_is_finite():
    deformation = Deformation(1.0)
    p = deformation.p_max * (1.0 - 1e-15)
    assert np.isfinite(deformed_kinetic(p, deformation, PhysicalParams()))


def test_bound_state_from_q():
    state = BoundState.from_q(2.0, PhysicalParams(m=0.5), "single")
    assert state.energy == pytest.approx(-4.0)
    assert state.to_dict() == {"label": "single", "energy": state.energy, "q": 2.0, "residual": 0.0}


@pytest.mark.parametrize("q", [0.0, -1.0, math.inf])
def test_bound_state_needs_positive_q(q):
    with pytest.raises(InvalidParameterError):
        BoundState(energy=-1.0, q=q, label=0)
