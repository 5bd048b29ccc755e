from flask import Blueprint, request

from src.routes.solve import result_response
from src.services.solver_service import minlen_solver

validate_bp = Blueprint('validate', __name__)


@validate_bp.route('/validate', methods=['GET'])
def validate():
    """Run the self-check suite; 200 when every check passes, 500 otherwise"""
    quick = request.args.get('quick', '0').lower() in ('1', 'true', 'yes')
    report = minlen_solver.validate(quick=quick)
    return result_response(report, 200 if report.passed else 500)
