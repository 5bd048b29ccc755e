from flask import Blueprint, jsonify, request

from src.errors import ConfigError
from src.models.records import RunConfig, SweepSpec
from src.routes.solve import result_response
from src.services.solver_service import minlen_solver

sweep_bp = Blueprint('sweep', __name__)


@sweep_bp.route('/sweep', methods=['POST'])
def sweep():
    """Single-parameter sweep; body is a RunConfig plus 'sweep' and optional 'fit' / 'oracle'"""
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        return jsonify({'error': 'Request body must be a JSON object'}), 400

    data = dict(data)
    sweep_data = data.pop('sweep', None)
    fit = bool(data.pop('fit', False))
    use_oracle = bool(data.pop('oracle', False))

    if isinstance(sweep_data, list):
        return jsonify({'error': 'Sweep exactly one parameter per request'}), 400
    if isinstance(sweep_data, str):
        spec = SweepSpec.parse(sweep_data)
    elif isinstance(sweep_data, dict):
        try:
            spec = SweepSpec(**sweep_data)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid sweep: {e}") from e
    else:
        return jsonify({'error': "A 'sweep' object {parameter, start, stop, count, log} is required"}), 400

    config = RunConfig.build(data)
    result = minlen_solver.sweep(config, spec, fit=fit, use_oracle=use_oracle, timestamp=False)
    return result_response(result)
