"""Generic rank of commutator matrices and the index it determines.

The index of a Lie algebra is ``dim - rank`` of its commutator matrix over
the fraction field of the symmetric algebra. Two backends compute that
rank:

* ``exact_rank``: fraction-free (Bareiss) elimination in ZZ[E_ij]. Every
  intermediate entry is a minor of the input, so divisions are exact and no
  rational functions are ever formed.
* ``randomized_rank``: substitute uniform values mod 2^61 - 1 for the
  symbols and eliminate numerically. A nonzero minor of degree at most
  ``dim`` vanishes at a random point with probability at most
  ``dim / p``, so the result is a lower bound that is exact with high
  probability.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

from app.config import DEFAULT_SEED, DEFAULT_TRIALS, EXACT_MAX_COEFF_BITS, MODULUS, RANK_WORKERS
from app.services.errors import OverflowUnrepresentable
from app.services.kernel_service import kernel_service
from app.services.lie_algebra import SymbolicMatrix, commutator_matrix
from app.services.poset_core import Poset

logger = logging.getLogger(__name__)

SEED_SPACE = 2 ** 64


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str
    trials: int = None
    seed: int = None
    failure_bound: Fraction = None

    def to_dict(self) -> dict:
        data = {'rank': self.rank, 'method': self.method}
        if self.method == 'randomized':
            data['trials'] = self.trials
            data['seed'] = self.seed
            data['failure_bound'] = str(self.failure_bound)
        return data


def _coefficient_bits(poly) -> int:
    return max((abs(int(c)).bit_length() for c in poly.values()), default=0)


def exact_rank(M: SymbolicMatrix, max_coeff_bits: int = EXACT_MAX_COEFF_BITS) -> RankResult:
    symbols = M.symbols()
    n_rows, n_cols = M.shape
    if not symbols:
        return RankResult(rank=0, method='exact')

    logger.debug("Exact elimination on a %dx%d matrix in %d symbols", n_rows, n_cols, len(symbols))
    R, *gens = ring([e.symbol_name for e in symbols], ZZ)
    gen_of = dict(zip(symbols, gens))

    def to_poly(form):
        poly = R.zero
        for e, c in form.terms:
            poly += c * gen_of[e]
        return poly

    rows = [[to_poly(form) for form in row] for row in M.entries]
    previous = R.one
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        pivot_row = next((r for r in range(rank, n_rows) if rows[r][col]), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, n_rows):
            lead = rows[r][col]
            for c in range(col + 1, n_cols):
                updated = (pivot * rows[r][c] - lead * rows[rank][c]).exquo(previous)
                if _coefficient_bits(updated) > max_coeff_bits:
                    raise OverflowUnrepresentable(
                        f"coefficients exceed {max_coeff_bits} bits during exact elimination; "
                        "use the randomized method"
                    )
                rows[r][c] = updated
            rows[r][col] = R.zero
        previous = pivot
        rank += 1
    return RankResult(rank=rank, method='exact')


def _evaluate(M: SymbolicMatrix, symbols: list, seed: int, trial: int) -> np.ndarray:
    # SeedSequence entropy must be non-negative; negative seeds wrap into 64 bits
    rng = np.random.default_rng([seed % SEED_SPACE, trial])
    draws = rng.integers(0, MODULUS, size=len(symbols), dtype=np.uint64)
    values = {e: int(v) for e, v in zip(symbols, draws)}
    return np.array(
        [[form.evaluate(values, MODULUS) for form in row] for row in M.entries],
        dtype=np.uint64,
    ).reshape(M.shape)


def randomized_rank(M: SymbolicMatrix, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
                    workers: int = RANK_WORKERS) -> RankResult:
    """Maximum numeric rank over ``trials`` independent evaluations.

    Trial ``t`` draws its values from the stream seeded by ``(seed, t)``, so
    adding trials never lowers the result.
    """
    if trials < 1:
        raise ValueError('trials must be at least 1')
    symbols = M.symbols()
    dim = max(M.shape)
    bound = min(Fraction(1), Fraction(dim, MODULUS)) ** trials

    if not symbols:
        return RankResult(rank=0, method='randomized', trials=trials, seed=seed,
                          failure_bound=Fraction(0))

    def run_trial(trial):
        return kernel_service.rank(_evaluate(M, symbols, seed, trial))

    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            ranks = list(pool.map(run_trial, range(trials)))
    else:
        ranks = [run_trial(t) for t in range(trials)]
    return RankResult(rank=max(ranks), method='randomized', trials=trials, seed=seed,
                      failure_bound=bound)


def matrix_rank(M: SymbolicMatrix, method: str = 'randomized', trials: int = DEFAULT_TRIALS,
                seed: int = DEFAULT_SEED) -> RankResult:
    if method == 'exact':
        return exact_rank(M)
    if method == 'randomized':
        return randomized_rank(M, trials=trials, seed=seed)
    raise ValueError(f"unknown rank method {method!r}")


def commutator_rank(P: Poset, variant: str = 'nilpotent', method: str = 'randomized',
                    trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> RankResult:
    return matrix_rank(commutator_matrix(P, variant), method, trials, seed)


def index_via_rank(P: Poset, variant: str = 'nilpotent', method: str = 'randomized',
                   trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> int:
    """dim g - rank C(g); the zero-dimensional algebra has index 0."""
    M = commutator_matrix(P, variant)
    return M.size - matrix_rank(M, method, trials, seed).rank


def is_frobenius(target, variant: str = 'solvable', method: str = 'randomized',
                 trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, result: RankResult = None) -> bool:
    """Index zero on a nonzero algebra; ``target`` is a Poset or a commutator matrix.

    Pass ``result`` to reuse a rank already computed for the same matrix.
    """
    M = target if isinstance(target, SymbolicMatrix) else commutator_matrix(target, variant)
    if result is None:
        result = matrix_rank(M, method, trials, seed)
    return M.size > 0 and M.size == result.rank
