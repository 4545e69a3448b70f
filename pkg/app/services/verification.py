"""Enumeration of naturally labeled posets and formula-versus-rank sweeps."""
import logging
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from app.config import (
    BRUTE_FORCE_MAX_N,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EXACT_SPOT_CHECK_RATE,
    MAX_ENUMERATION_N,
    SWEEP_WORKERS,
)
from app.services.errors import OutOfRange, ResourceBound
from app.services.index_formulas import lower_bound, nilpotent_index, solvable_index_h2
from app.services.lie_algebra import commutator_matrix
from app.services.poset_core import Poset, poset_to_dict, random_poset
from app.services.rank_engine import exact_rank, matrix_rank, randomized_rank
from app.services.reduction import check_step, reduce_to_height2

logger = logging.getLogger(__name__)

CHECKS = (
    'nilpotent_formula',
    'lower_bound',
    'positivity',
    'height_one',
    'solvable_formula',
    'reduction_rank',
    'method_agreement',
)


def _natural_pairs(n: int) -> list:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def _check_size(n: int, limit: int):
    if not isinstance(n, int) or n < 0:
        raise OutOfRange(f"element count must be a non-negative integer, got {n!r}")
    if n > limit:
        raise ResourceBound(f"n = {n} exceeds the enumeration limit {limit}")


def _add_relation(order: frozenset, i: int, j: int) -> frozenset:
    """Closure of ``order`` plus i < j, for a transitively closed ``order``."""
    down = {a for a, b in order if b == i} | {i}
    up = {b for a, b in order if a == j} | {j}
    return order | {(a, b) for a in down for b in up}


def _sort_key(order: frozenset) -> tuple:
    return len(order), tuple(sorted(order))


def enumerate_posets(n: int, max_n: int = MAX_ENUMERATION_N):
    """Yield every naturally labeled poset on 1..n exactly once.

    Grows relation sets upward from the antichain one pair at a time,
    deduplicating closed sets. Order is by relation count, then by the
    sorted relation tuple.
    """
    _check_size(n, max_n)
    pairs = _natural_pairs(n)
    seen = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        grown = []
        for order in frontier:
            for i, j in pairs:
                if (i, j) in order:
                    continue
                closed = _add_relation(order, i, j)
                if closed not in seen:
                    seen.add(closed)
                    grown.append(closed)
        frontier = grown
    logger.debug("Enumerated %d posets on %d elements", len(seen), n)
    for order in sorted(seen, key=_sort_key):
        yield Poset(n, order)


def _is_transitive(order: frozenset) -> bool:
    return all((a, d) in order for a, b in order for c, d in order if b == c)


def brute_force_posets(n: int) -> list:
    """Naive oracle: filter all subsets of natural pairs for transitivity."""
    _check_size(n, BRUTE_FORCE_MAX_N)
    pairs = _natural_pairs(n)
    found = []
    for k in range(len(pairs) + 1):
        for subset in combinations(pairs, k):
            order = frozenset(subset)
            if _is_transitive(order):
                found.append(order)
    return [Poset(n, order) for order in sorted(found, key=_sort_key)]


@dataclass
class SweepReport:
    n: int
    poset_count: int = 0
    checks_run: Counter = field(default_factory=Counter)
    mismatches: list = field(default_factory=list)
    method: str = 'randomized'
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    elapsed: float = 0.0
    per_n: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self, timing: bool = False) -> dict:
        data = {
            'n': self.n,
            'poset_count': self.poset_count,
            'method': self.method,
            'trials': self.trials,
            'seed': self.seed,
            'checks_run': dict(sorted(self.checks_run.items())),
            'mismatch_count': len(self.mismatches),
            'mismatches': self.mismatches,
            'passed': self.passed,
        }
        if self.per_n:
            data['per_n'] = {str(k): v for k, v in sorted(self.per_n.items())}
        if timing:
            data['elapsed'] = round(self.elapsed, 3)
        return data


def _mismatch(check: str, P: Poset, expected, observed) -> dict:
    return {'check': check, 'poset': poset_to_dict(P), 'expected': expected, 'observed': observed}


def check_poset(P: Poset, checks=CHECKS, method: str = 'randomized', trials: int = DEFAULT_TRIALS,
                seed: int = DEFAULT_SEED, spot_check: bool = False) -> tuple:
    """Run the selected checks on one poset; returns (checks run, mismatches)."""
    ran = Counter()
    found = []

    M = commutator_matrix(P, 'nilpotent')
    rank = matrix_rank(M, method, trials, seed).rank
    oracle = M.size - rank
    formula = nilpotent_index(P).index
    bound = lower_bound(P)

    if 'nilpotent_formula' in checks:
        ran['nilpotent_formula'] += 1
        if formula != oracle:
            found.append(_mismatch('nilpotent_formula', P, oracle, formula))

    if 'lower_bound' in checks:
        ran['lower_bound'] += 1
        if oracle < bound:
            found.append(_mismatch('lower_bound', P, f">= {bound}", oracle))

    if 'positivity' in checks and P.rel_count > 0:
        ran['positivity'] += 1
        if oracle < 1 or formula < 1:
            found.append(_mismatch('positivity', P, '>= 1', min(oracle, formula)))

    if 'height_one' in checks and P.height <= 1:
        ran['height_one'] += 1
        if formula != bound or oracle != bound:
            found.append(_mismatch('height_one', P, bound, oracle))

    S = commutator_matrix(P, 'solvable')
    solvable_rank = None

    if 'solvable_formula' in checks and P.height <= 2:
        ran['solvable_formula'] += 1
        solvable_rank = matrix_rank(S, method, trials, seed).rank
        solvable_oracle = S.size - solvable_rank
        solvable_formula = solvable_index_h2(P).index
        if solvable_formula != solvable_oracle:
            found.append(_mismatch('solvable_formula', P, solvable_oracle, solvable_formula))

    if 'reduction_rank' in checks and P.height >= 3:
        ran['reduction_rank'] += 1
        _, steps = reduce_to_height2(P)
        for step in steps:
            verdict = check_step(step, method, trials, seed)
            if not verdict.passed:
                found.append(_mismatch('reduction_rank', step.before, True, verdict.to_dict()))
                break

    if 'method_agreement' in checks and spot_check:
        # one comparison per commutator matrix, nilpotent then solvable
        for variant, matrix, known in (('nilpotent', M, rank), ('solvable', S, solvable_rank)):
            ran['method_agreement'] += 1
            if known is None:
                known = matrix_rank(matrix, method, trials, seed).rank
            exact = exact_rank(matrix).rank if method == 'randomized' else known
            randomized = known if method == 'randomized' else randomized_rank(matrix, trials, seed).rank
            if exact != randomized:
                found.append(_mismatch('method_agreement', P, {variant: exact}, {variant: randomized}))

    return ran, found


def _check_task(task: tuple) -> tuple:
    P, checks, method, trials, seed, spot_check = task
    return check_poset(P, checks, method, trials, seed, spot_check)


def _validate_checks(checks) -> tuple:
    checks = tuple(checks) if checks else CHECKS
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    return checks


def _run(posets, n: int, checks, method: str, trials: int, seed: int, exact: bool,
         workers: int) -> SweepReport:
    checks = _validate_checks(checks)
    picker = random.Random(seed)
    tasks = [
        (P, checks, method, trials, seed + idx, exact or picker.random() < EXACT_SPOT_CHECK_RATE)
        for idx, P in enumerate(posets)
    ]

    report = SweepReport(n=n, poset_count=len(tasks), method=method, trials=trials, seed=seed)
    started = time.perf_counter()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_check_task(task) for task in tasks]

    for ran, found in results:
        report.checks_run.update(ran)
        report.mismatches.extend(found)
    report.elapsed = time.perf_counter() - started

    for item in report.mismatches:
        logger.warning("Check %s failed on %s: expected %s, got %s",
                       item['check'], item['poset'], item['expected'], item['observed'])
    return report


def sweep(n: int, checks=CHECKS, method: str = 'randomized', trials: int = DEFAULT_TRIALS,
          seed: int = DEFAULT_SEED, exact: bool = False, workers: int = SWEEP_WORKERS,
          max_n: int = MAX_ENUMERATION_N) -> SweepReport:
    """Run ``checks`` on every poset on n elements.

    Poset number ``idx`` uses seed ``seed + idx`` for its randomized ranks.
    Exact ranks are spot-checked on a seeded sample, or on every poset when
    ``exact`` is set.
    """
    _check_size(n, max_n)
    logger.info("Sweeping all posets on %d elements", n)
    report = _run(list(enumerate_posets(n, max_n)), n, checks, method, trials, seed, exact, workers)
    logger.info("n=%d: %d posets, %d mismatches in %.2fs",
                n, report.poset_count, len(report.mismatches), report.elapsed)
    return report


def sweep_range(max_n: int, checks=CHECKS, method: str = 'randomized', trials: int = DEFAULT_TRIALS,
                seed: int = DEFAULT_SEED, exact: bool = False, workers: int = SWEEP_WORKERS,
                limit: int = MAX_ENUMERATION_N) -> SweepReport:
    """``sweep`` for n = 1..max_n merged into one report."""
    _check_size(max_n, limit)
    combined = SweepReport(n=max_n, method=method, trials=trials, seed=seed)
    for n in range(1, max_n + 1):
        report = sweep(n, checks, method, trials, seed, exact, workers, limit)
        combined.poset_count += report.poset_count
        combined.checks_run.update(report.checks_run)
        combined.mismatches.extend(report.mismatches)
        combined.elapsed += report.elapsed
        combined.per_n[n] = report.poset_count
    return combined


def sample_sweep(count: int, max_size: int = 8, seed: int = DEFAULT_SEED, checks=CHECKS,
                 method: str = 'randomized', trials: int = DEFAULT_TRIALS,
                 workers: int = SWEEP_WORKERS) -> SweepReport:
    """Run ``checks`` on ``count`` random posets with 1..max_size elements."""
    rng = random.Random(seed)
    posets = []
    for _ in range(count):
        n = rng.randint(1, max_size)
        posets.append(random_poset(n, rng.random(), rng))
    logger.info("Sweeping %d random posets with at most %d elements", count, max_size)
    return _run(posets, max_size, checks, method, trials, seed, False, workers)
