import math

import pytest


def test_potentials(client):
    response = client.get('/api/potentials')
    assert response.status_code == 200
    kinds = [entry['potential'] for entry in response.get_json()]
    assert kinds == ['delta', 'double-delta', 'coulomb']


def test_solve(client):
    response = client.post('/api/solve', json={'potential': 'delta', 'u0': 1.0, 'beta': 0.0})
    assert response.status_code == 200
    data = response.get_json()
    assert data['states'][0]['energy'] == pytest.approx(-2.0 * math.pi ** 2, rel=1e-12)
    assert 'seconds' in data['meta']


def test_solve_without_timestamp(client):
    response = client.post('/api/solve?timestamp=0', json={'potential': 'coulomb', 'beta': 0.02, 'n_states': 2})
    assert response.status_code == 200
    data = response.get_json()
    assert 'seconds' not in data['meta']
    assert len(data['states']) == 2


def test_solve_accepts_infinite_extension_flag(client):
    response = client.post('/api/solve', json={'potential': 'coulomb', 'A': '-inf', 'beta': 0.02, 'n_states': 2})
    assert response.status_code == 200
    data = response.get_json()
    assert data['config']['A'] == '-inf'
    assert data['derived']['delta'] == 1.0
    assert [s['label'] for s in data['states']] == [0, 1]


def test_solve_empty_body_uses_defaults(client):
    response = client.post('/api/solve')
    assert response.status_code == 200
    assert response.get_json()['config']['potential'] == 'delta'


def test_solve_rejects_non_object(client):
    response = client.post('/api/solve', json=[1, 2, 3])
    assert response.status_code == 400
    assert 'error' in response.get_json()


def test_solve_rejects_unknown_key(client):
    response = client.post('/api/solve', json={'potential': 'delta', 'gamma': 1.0})
    assert response.status_code == 400
    assert response.get_json()['type'] == 'ConfigError'


def test_solve_rejects_negative_beta(client):
    response = client.post('/api/solve', json={'potential': 'delta', 'beta': -0.1})
    assert response.status_code == 400


def test_oracle(client):
    response = client.post('/api/oracle', json={'potential': 'delta', 'beta': 0.01, 'grid': 400})
    assert response.status_code == 200
    (state,) = response.get_json()['states']
    assert state['deviation'] < 1e-6


def test_oracle_needs_deformation(client):
    response = client.post('/api/oracle', json={'potential': 'delta', 'beta': 0.0, 'grid': 64})
    assert response.status_code == 400
    assert 'beta > 0' in response.get_json()['error']


def test_sweep(client):
    body = {
        'potential': 'delta',
        'sweep': {'parameter': 'beta', 'start': 0.0, 'stop': 0.1, 'count': 3},
    }
    response = client.post('/api/sweep', json=body)
    assert response.status_code == 200
    data = response.get_json()
    assert [r['point']['value'] for r in data['records']] == [0.0, 0.05, 0.1]
    energies = [r['states'][0]['energy'] for r in data['records']]
    assert energies[0] < energies[1] < energies[2] < 0


def test_sweep_string_spec(client):
    response = client.post('/api/sweep', json={'potential': 'delta', 'sweep': 'u0:1:2:2'})
    assert response.status_code == 200
    assert len(response.get_json()['records']) == 2


def test_sweep_requires_single_parameter(client):
    response = client.post('/api/sweep', json={'sweep': ['beta:0:1:2', 'u0:1:2:2']})
    assert response.status_code == 400


def test_sweep_requires_spec(client):
    response = client.post('/api/sweep', json={'potential': 'delta'})
    assert response.status_code == 400


def test_sweep_rejects_bad_parameter(client):
    response = client.post('/api/sweep', json={'sweep': {'parameter': 'm', 'start': 1, 'stop': 2, 'count': 2}})
    assert response.status_code == 400


@pytest.mark.slow
def test_validate_quick(client):
    response = client.get('/api/validate?quick=1')
    assert response.status_code == 200
    data = response.get_json()
    assert data['passed'] is True
    assert data['quick'] is True
