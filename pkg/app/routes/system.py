from flask import Blueprint, jsonify

from app.config import MAX_API_POSET_SIZE, MAX_API_SWEEP_N, MAX_ENUMERATION_N
from app.services.kernel_service import kernel_service

bp = Blueprint('system', __name__, url_prefix='/api/system')


@bp.route('/status', methods=['GET'])
def get_status():
    """Modular kernel backend and request limits."""
    return jsonify({
        'kernel': kernel_service.status(),
        'limits': {
            'max_poset_size': MAX_API_POSET_SIZE,
            'max_sweep_n': MAX_API_SWEEP_N,
            'max_enumeration_n': MAX_ENUMERATION_N,
        },
    })
