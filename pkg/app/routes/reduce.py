from flask import Blueprint, jsonify, request

from app.routes.payload import poset_from_payload, validate_rank_options
from app.services.reduction import check_step, reduce_to_height2, step_dot_pair, trace_to_dict

bp = Blueprint('reduce', __name__, url_prefix='/api/reduce')


@bp.route('', methods=['POST'])
def reduce_poset():
    """Reduction trace; ``verify`` adds per-step invariant checks, ``dot`` the Hasse diagrams."""
    data = request.get_json(silent=True)
    P = poset_from_payload(data)
    final, steps = reduce_to_height2(P)
    result = trace_to_dict(P, final, steps)

    if data.get('verify'):
        options = validate_rank_options(data)
        if isinstance(options, str):
            return jsonify({'error': options}), 400
        _, method, trials, seed = options
        result['method'] = method
        result['seed'] = seed
        result['checks'] = [check_step(step, method, trials, seed).to_dict() for step in steps]

    if data.get('dot'):
        result['dot'] = [list(step_dot_pair(step)) for step in steps]
    return jsonify(result)
