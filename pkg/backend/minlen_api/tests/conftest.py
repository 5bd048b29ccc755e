import pytest
from click.testing import CliRunner

from src import create_app
from src.models.core import Deformation, PhysicalParams


@pytest.fixture
def app():
    app = create_app({'TESTING': True})
    yield app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def params():
    return PhysicalParams()


@pytest.fixture
def deformed():
    return Deformation(0.01)
