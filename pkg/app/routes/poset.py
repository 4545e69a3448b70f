from flask import Blueprint, Response, jsonify, request

from app.routes.payload import poset_from_payload
from app.services.poset_core import hasse_dot, middle_sections, stats, up_down

bp = Blueprint('poset', __name__, url_prefix='/api/poset')


@bp.route('/stats', methods=['POST'])
def poset_stats():
    """Relation counts, extremal elements, height, covers and components."""
    P = poset_from_payload(request.get_json(silent=True))
    data = stats(P).to_dict()
    data['n'] = P.n
    data['interior'] = list(P.interior)
    return jsonify(data)


@bp.route('/up-down', methods=['POST'])
def poset_up_down():
    """D/U profiles of every element, or of the elements listed in ``elements``."""
    data = request.get_json(silent=True)
    P = poset_from_payload(data)
    elements = data.get('elements') or list(P.elements)
    if not isinstance(elements, list):
        return jsonify({'error': 'elements must be a list of labels'}), 400
    return jsonify([up_down(P, p).to_dict() for p in elements])


@bp.route('/middle-sections', methods=['POST'])
def poset_middle_sections():
    data = request.get_json(silent=True)
    P = poset_from_payload(data)
    n = data.get('height', P.height)
    if not isinstance(n, int) or isinstance(n, bool):
        return jsonify({'error': 'height must be an integer'}), 400
    return jsonify({'height': n, 'sections': [list(s) for s in middle_sections(P, n)]})


@bp.route('/hasse', methods=['POST'])
def poset_hasse():
    P = poset_from_payload(request.get_json(silent=True))
    return Response(hasse_dot(P), mimetype='text/vnd.graphviz')
