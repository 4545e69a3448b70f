"""Request-body helpers shared by the API blueprints."""
from app.config import DEFAULT_SEED, DEFAULT_TRIALS, MAX_API_POSET_SIZE, METHODS, VARIANTS
from app.services.errors import PosetError, PosetParseError
from app.services.poset_core import Poset, parse_poset, parse_poset_json


def poset_from_payload(data) -> Poset:
    """Poset from ``{"poset": {...}}`` or ``{"text": "..."}``."""
    if not isinstance(data, dict):
        raise PosetParseError('Invalid JSON')
    if 'poset' in data:
        P = parse_poset_json(data['poset'])
    elif isinstance(data.get('text'), str):
        P = parse_poset(data['text'])
    else:
        raise PosetParseError("a 'poset' object or 'text' string is required")
    if P.n > MAX_API_POSET_SIZE:
        raise PosetError(f"poset has {P.n} elements; the API accepts at most {MAX_API_POSET_SIZE}")
    return P


def validate_rank_options(data: dict):
    """Return (variant, method, trials, seed), or an error message string."""
    variant = data.get('variant', 'nilpotent')
    method = data.get('method', 'randomized')
    trials = data.get('trials', DEFAULT_TRIALS)
    seed = data.get('seed', DEFAULT_SEED)
    if variant not in VARIANTS:
        return f"variant must be one of {', '.join(VARIANTS)}"
    if method not in METHODS:
        return f"method must be one of {', '.join(METHODS)}"
    if not isinstance(trials, int) or isinstance(trials, bool) or not 1 <= trials <= 20:
        return 'trials must be an integer between 1 and 20'
    if not isinstance(seed, int) or isinstance(seed, bool):
        return 'seed must be an integer'
    return variant, method, trials, seed
