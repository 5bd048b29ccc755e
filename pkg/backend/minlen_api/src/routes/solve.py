from flask import Blueprint, Response, jsonify, request

from src.models.records import RunConfig
from src.services import export
from src.services.solver_service import minlen_solver

solve_bp = Blueprint('solve', __name__)


def _config_from_request():
    data = request.get_json(silent=True)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        return None
    return RunConfig.build(data)


def result_response(payload, status=200):
    """orjson body, so floats keep full precision and inf becomes null."""
    return Response(export.to_json(payload), status=status, mimetype='application/json')


@solve_bp.route('/potentials', methods=['GET'])
def get_potentials():
    """Supported potentials and their parameters"""
    return jsonify(minlen_solver.catalog())


@solve_bp.route('/solve', methods=['POST'])
def solve():
    """Analytic bound states for a RunConfig body"""
    config = _config_from_request()
    if config is None:
        return jsonify({'error': 'Request body must be a JSON object'}), 400
    return result_response(minlen_solver.solve(config, timestamp=request.args.get('timestamp', '1') != '0'))


@solve_bp.route('/oracle', methods=['POST'])
def oracle():
    """Nystrom spectrum compared with the analytic levels"""
    config = _config_from_request()
    if config is None:
        return jsonify({'error': 'Request body must be a JSON object'}), 400
    return result_response(minlen_solver.oracle(config, timestamp=request.args.get('timestamp', '1') != '0'))
