from flask import Blueprint, Response, jsonify, request

from app.config import ORDERINGS
from app.routes.payload import poset_from_payload, validate_rank_options
from app.services.errors import HeightTooLarge
from app.services.index_formulas import index_report
from app.services.lie_algebra import commutator_matrix, matrix_to_dict, render_matrix
from app.services.rank_engine import is_frobenius, matrix_rank

bp = Blueprint('index', __name__, url_prefix='/api/index')


@bp.route('', methods=['POST'])
def compute_index():
    """Index by closed formula and by commutator-matrix rank, with a verdict."""
    data = request.get_json(silent=True)
    P = poset_from_payload(data)
    options = validate_rank_options(data)
    if isinstance(options, str):
        return jsonify({'error': options}), 400
    variant, method, trials, seed = options

    M = commutator_matrix(P, variant)
    result = matrix_rank(M, method, trials, seed)
    oracle = M.size - result.rank
    frobenius = is_frobenius(M, result=result)
    try:
        report = index_report(P, variant)
    except HeightTooLarge:
        report = None

    if report is None:
        verdict = 'ORACLE-ONLY'
    else:
        verdict = 'AGREE' if report.index == oracle else 'DISAGREE'
    return jsonify({
        'variant': variant,
        'seed': seed,
        'rank': result.to_dict(),
        'dimension': M.size,
        'oracle': oracle,
        'frobenius': frobenius,
        'formula': report.to_dict() if report else None,
        'verdict': verdict,
    })


@bp.route('/rank', methods=['POST'])
def compute_rank():
    data = request.get_json(silent=True)
    P = poset_from_payload(data)
    options = validate_rank_options(data)
    if isinstance(options, str):
        return jsonify({'error': options}), 400
    variant, method, trials, seed = options

    M = commutator_matrix(P, variant)
    result = matrix_rank(M, method, trials, seed)
    return jsonify({'variant': variant, 'dimension': M.size, 'seed': seed, **result.to_dict()})


@bp.route('/matrix', methods=['POST'])
def get_matrix():
    """Symbolic commutator matrix as JSON, or as text with ``"format": "text"``."""
    data = request.get_json(silent=True)
    P = poset_from_payload(data)
    variant = data.get('variant', 'nilpotent')
    ordering = data.get('ordering', 'lex')
    if variant not in ('nilpotent', 'solvable'):
        return jsonify({'error': 'variant must be nilpotent or solvable'}), 400
    if ordering not in ORDERINGS:
        return jsonify({'error': f"ordering must be one of {', '.join(ORDERINGS)}"}), 400

    M = commutator_matrix(P, variant, ordering)
    if data.get('nonzero'):
        M = M.nonzero_view()
    if data.get('format') == 'text':
        return Response(render_matrix(M), mimetype='text/plain')
    return jsonify(matrix_to_dict(M))
