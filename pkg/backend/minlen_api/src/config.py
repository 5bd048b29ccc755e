import os

from dotenv import load_dotenv

basedir = os.path.abspath(os.path.dirname(__file__))

# Optional .env next to the backend package
load_dotenv(os.path.join(basedir, '..', '.env'))


def _env(name, default, cast=str):
    return cast(os.getenv(f'MINLEN_{name}', default))


class Config:
    # Nystrom grid order and number of reported states
    GRID_ORDER = _env('GRID_ORDER', 2000, int)
    N_STATES = _env('N_STATES', 5, int)
    WAVEFUNCTION_NODES = _env('WAVEFUNCTION_NODES', 400, int)

    # Tolerances
    ROOT_TOL = _env('ROOT_TOL', 1e-12, float)
    QUAD_EPSABS = _env('QUAD_EPSABS', 1e-10, float)
    QUAD_EPSREL = _env('QUAD_EPSREL', 1e-12, float)
    HERMITIAN_TOL = _env('HERMITIAN_TOL', 1e-12, float)

    # Sweeps
    FIT_DEGREE = _env('FIT_DEGREE', 5, int)
    SWEEP_WORKERS = _env('SWEEP_WORKERS', 4, int)

    # Logging
    LOG_LEVEL = _env('LOG_LEVEL', 'WARNING')
    LOG_JSON = _env('LOG_JSON', '1') not in ('0', 'false', 'False', '')
