from flask import Blueprint, jsonify, request

from app.config import DEFAULT_SEED, DEFAULT_TRIALS, MAX_API_SWEEP_N
from app.services.verification import CHECKS, sweep

bp = Blueprint('sweep', __name__, url_prefix='/api/sweep')


@bp.route('', methods=['POST'])
def run_sweep():
    """Sweep every poset on ``n`` elements (n <= MAX_API_SWEEP_N)."""
    data = request.get_json(silent=True)
    if data is None:
        return jsonify({'error': 'Invalid JSON'}), 400

    n = data.get('n')
    checks = data.get('checks') or list(CHECKS)
    trials = data.get('trials', DEFAULT_TRIALS)
    seed = data.get('seed', DEFAULT_SEED)

    if not isinstance(n, int) or isinstance(n, bool) or not 0 <= n <= MAX_API_SWEEP_N:
        return jsonify({'error': f'n must be an integer between 0 and {MAX_API_SWEEP_N}'}), 400
    if not isinstance(checks, list) or any(c not in CHECKS for c in checks):
        return jsonify({'error': f"checks must be a list drawn from {', '.join(CHECKS)}"}), 400
    if not isinstance(trials, int) or isinstance(trials, bool) or not 1 <= trials <= 20:
        return jsonify({'error': 'trials must be an integer between 1 and 20'}), 400
    if not isinstance(seed, int) or isinstance(seed, bool):
        return jsonify({'error': 'seed must be an integer'}), 400

    report = sweep(n, tuple(checks), trials=trials, seed=seed, workers=1)
    return jsonify(report.to_dict())
