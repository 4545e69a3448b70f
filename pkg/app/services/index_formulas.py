"""Closed-form index formulas for Lie poset algebras."""
from dataclasses import dataclass, field

from app.services.errors import HeightTooLarge
from app.services.poset_core import Poset, stats, up_down


@dataclass(frozen=True)
class IndexReport:
    index: int
    formula_used: str
    variant: str = 'nilpotent'
    terms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'index': self.index,
            'variant': self.variant,
            'formula_used': self.formula_used,
            'terms': self.terms,
        }


def lower_bound(P: Poset) -> int:
    """|Rel_E(P)|, the number of relations between extremal elements."""
    return len(stats(P).rel_e)


def nilpotent_index(P: Poset) -> IndexReport:
    """|Rel(P)| - 2 * sum of min(D(p), U(p)) over non-extremal p.

    On height at most one there are no non-extremal elements and the value
    is |Rel_E(P)|.
    """
    min_terms = {}
    for p in P.interior:
        profile = up_down(P, p)
        min_terms[p] = min(profile.d, profile.u)

    if P.height <= 1:
        formula = 'height-one'
    elif P.height == 2:
        formula = 'height-two'
    else:
        formula = 'general'

    index = P.rel_count - 2 * sum(min_terms.values())
    return IndexReport(
        index=index,
        formula_used=formula,
        variant='nilpotent',
        terms={
            'rel_count': P.rel_count,
            'min_terms': {str(p): m for p, m in min_terms.items()},
        },
    )


def _ud(P: Poset, p: int) -> int:
    profile = up_down(P, p)
    if profile.u != profile.d:
        return abs(profile.u - profile.d)
    return 2


def solvable_index_h2(P: Poset) -> IndexReport:
    """|Rel_E| - |P| + 2 C_P + sum of UD(p) over non-extremal p, for height <= 2.

    UD(p) is |U(p) - D(p)| when the counts differ and 2 otherwise; C_P is
    the number of connected components of the Hasse diagram.
    """
    if P.height > 2:
        raise HeightTooLarge(
            f"the solvable formula covers height at most 2, got height {P.height}"
        )
    poset_stats = stats(P)
    ud_terms = {p: _ud(P, p) for p in P.interior}
    rel_e = len(poset_stats.rel_e)
    index = rel_e - P.n + 2 * poset_stats.components + sum(ud_terms.values())
    return IndexReport(
        index=index,
        formula_used='solvable-height-two',
        variant='solvable',
        terms={
            'rel_e': rel_e,
            'size': P.n,
            'components': poset_stats.components,
            'ud_terms': {str(p): v for p, v in ud_terms.items()},
        },
    )


def index_report(P: Poset, variant: str = 'nilpotent') -> IndexReport:
    if variant == 'nilpotent':
        return nilpotent_index(P)
    if variant == 'solvable':
        return solvable_index_h2(P)
    raise ValueError(f"unknown variant {variant!r}")
