"""Height reduction of posets with the same commutator-matrix rank.

A poset of height n >= 3 is rewritten around one middle section
p_1 < ... < p_{n-1}. With D_E(p_{n-1}) >= U_E(p_{n-1}) the surgery happens
at p = p_{n-1}:

* every non-extremal q < p loses the relation q < p, and a fresh minimal
  element ``p_q`` is placed below p instead;
* a fresh maximal element ``p'`` is placed above every former predecessor
  of p.

Otherwise the dual surgery happens at p = p_1 with fresh maximal elements
``p^q`` and a fresh minimal ``p'``. Non-extremal elements keep their up and
down counts, and the number of middle sections of length n drops, so
repeating the step ends at height two.
"""
import logging
from dataclasses import dataclass, field

import networkx as nx

from app.config import DEFAULT_SEED, DEFAULT_TRIALS, MAX_REDUCTION_STEPS
from app.services.errors import HeightTooSmall, ReductionDiverged
from app.services.index_formulas import nilpotent_index
from app.services.lie_algebra import BasisElement, commutator_matrix, restrict_rows
from app.services.poset_core import (
    Poset,
    build_poset,
    hasse_dot,
    middle_sections,
    poset_to_dict,
    up_down,
)
from app.services.rank_engine import commutator_rank, matrix_rank

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReductionStep:
    chain: tuple
    case: int
    pivot: int
    new_elements: dict  # display name -> label in ``after``
    relabel: dict  # label in ``before`` -> label in ``after``
    before: Poset
    after: Poset = field(repr=False)

    def to_dict(self) -> dict:
        return {
            'chain': list(self.chain),
            'case': self.case,
            'pivot': self.pivot,
            'new_elements': dict(self.new_elements),
            'relabel': {str(old): new for old, new in sorted(self.relabel.items())},
            'before': poset_to_dict(self.before),
            'after': poset_to_dict(self.after),
        }


@dataclass(frozen=True)
class StepCheck:
    rank_before: int
    rank_after: int
    rank_invariant: bool
    ud_preserved: bool
    interior_preserved: bool
    sections_decrease: bool
    formula_consistent: bool
    block_spanned: bool

    @property
    def passed(self) -> bool:
        return (self.rank_invariant and self.ud_preserved and self.interior_preserved
                and self.sections_decrease and self.formula_consistent and self.block_spanned)

    def to_dict(self) -> dict:
        return {
            'rank_before': self.rank_before,
            'rank_after': self.rank_after,
            'rank_invariant': self.rank_invariant,
            'ud_preserved': self.ud_preserved,
            'interior_preserved': self.interior_preserved,
            'sections_decrease': self.sections_decrease,
            'formula_consistent': self.formula_consistent,
            'block_spanned': self.block_spanned,
            'passed': self.passed,
        }


def _survivor(s: int) -> tuple:
    return (s, 0, 0)


def reduce_once(P: Poset) -> ReductionStep:
    if P.height < 3:
        raise HeightTooSmall(f"height reduction needs height at least 3, got {P.height}")

    chain = middle_sections(P)[0]
    last = chain[-1]
    profile = up_down(P, last)
    case = 1 if profile.d_e >= profile.u_e else 2
    pivot = last if case == 1 else chain[0]
    pivot_name = P.name(pivot)

    # Node keys sort survivors by label; fresh elements for the pivot sit
    # right before it (minimal) or right after it (maximal).
    edges = {(_survivor(i), _survivor(j)) for i, j in P.strict_order}
    names = {_survivor(s): P.name(s) for s in P.elements}
    twin = (pivot, 1, 0) if case == 1 else (pivot, -1, 0)
    names[twin] = f"{pivot_name}'"

    if case == 1:
        for q in sorted(P.below(pivot)):
            edges.add((_survivor(q), twin))
            if q in P.ext:
                continue
            edges.discard((_survivor(q), _survivor(pivot)))
            fresh = (pivot, -1, q)
            names[fresh] = f"{pivot_name}_{P.name(q)}"
            edges.add((fresh, _survivor(pivot)))
    else:
        for q in sorted(P.above(pivot)):
            edges.add((twin, _survivor(q)))
            if q in P.ext:
                continue
            edges.discard((_survivor(pivot), _survivor(q)))
            fresh = (pivot, 1, q)
            names[fresh] = f"{pivot_name}^{P.name(q)}"
            edges.add((_survivor(pivot), fresh))

    g = nx.DiGraph()
    g.add_nodes_from(names)
    g.add_edges_from(edges)
    g = nx.transitive_closure_dag(g)
    order = list(nx.lexicographical_topological_sort(g, key=lambda node: node))
    label = {node: i for i, node in enumerate(order, start=1)}

    aliases = {label[node]: names[node] for node in order if names[node] != str(label[node])}
    after = build_poset(len(order), [(label[a], label[b]) for a, b in g.edges()], aliases)

    step = ReductionStep(
        chain=tuple(chain),
        case=case,
        pivot=pivot,
        new_elements={names[node]: label[node] for node in order if node[1] != 0},
        relabel={s: label[_survivor(s)] for s in P.elements},
        before=P,
        after=after,
    )
    logger.debug(
        "Reduced height-%d poset on %d elements: case %d at %s, %d new elements",
        P.height, P.n, case, pivot_name, len(step.new_elements),
    )
    return step


def reduce_to_height2(P: Poset, max_steps: int = MAX_REDUCTION_STEPS) -> tuple:
    """Apply ``reduce_once`` until the height is at most two.

    Returns the final poset and the list of steps; inputs of height at most
    two come back unchanged with an empty trace.
    """
    steps = []
    current = P
    while current.height > 2:
        if len(steps) >= max_steps:
            raise ReductionDiverged(f"height reduction did not finish within {max_steps} steps")
        step = reduce_once(current)
        steps.append(step)
        current = step.after
    return current, steps


def check_step(step: ReductionStep, method: str = 'randomized', trials: int = DEFAULT_TRIALS,
               seed: int = DEFAULT_SEED) -> StepCheck:
    before, after = step.before, step.after
    rank_before = commutator_rank(before, 'nilpotent', method, trials, seed).rank
    rank_after = commutator_rank(after, 'nilpotent', method, trials, seed).rank

    ud_preserved = True
    for p in before.interior:
        old, new = up_down(before, p), up_down(after, step.relabel[p])
        if (old.d, old.u) != (new.d, new.u):
            ud_preserved = False
            break

    interior_preserved = {step.relabel[p] for p in before.interior} == set(after.interior)

    n = before.height
    sections_decrease = len(middle_sections(after, n)) < len(middle_sections(before, n))

    formula_before = nilpotent_index(before).index
    formula_after = nilpotent_index(after).index
    formula_consistent = (
        formula_before == before.rel_count - rank_before
        and formula_after == after.rel_count - rank_after
        and formula_after - formula_before == after.rel_count - before.rel_count
    )

    return StepCheck(
        rank_before=rank_before,
        rank_after=rank_after,
        rank_invariant=rank_before == rank_after,
        ud_preserved=ud_preserved,
        interior_preserved=interior_preserved,
        sections_decrease=sections_decrease,
        formula_consistent=formula_consistent,
        block_spanned=spanning_check(before, step.chain, step.case, method, trials, seed),
    )


def spanning_check(P: Poset, chain, case: int, method: str = 'randomized',
                   trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> bool:
    """Rows restricted to the pivot's outer block are spanned by the pivot block rows.

    Case 1 pivots on p = p_{n-1}: the rows E_{l,p} (l minimal) are compared
    against all rows, both restricted to the columns E_{p,b} (b maximal).
    Case 2 is the transpose picture at p = p_1.
    """
    pivot = chain[-1] if case == 1 else chain[0]
    profile = up_down(P, pivot)
    lower = [BasisElement(i, j) for i, j in sorted(profile.b_lower)]
    upper = [BasisElement(i, j) for i, j in sorted(profile.b_upper)]
    block_rows, block_cols = (lower, upper) if case == 1 else (upper, lower)

    M = commutator_matrix(P)
    everything = restrict_rows(M, M.row_labels, block_cols)
    block = restrict_rows(M, block_rows, block_cols)
    return (matrix_rank(everything, method, trials, seed).rank
            == matrix_rank(block, method, trials, seed).rank)


def step_dot_pair(step: ReductionStep) -> tuple:
    """Hasse diagrams of the poset before and after the step, as DOT."""
    return hasse_dot(step.before, 'before'), hasse_dot(step.after, 'after')


def trace_to_dict(P: Poset, final: Poset, steps: list) -> dict:
    return {
        'input': poset_to_dict(P),
        'final': poset_to_dict(final),
        'final_height': final.height,
        'steps': [step.to_dict() for step in steps],
    }
