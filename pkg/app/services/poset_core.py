"""Finite naturally labeled posets and the statistics the index formulas consume.

Elements are the integers 1..n. A poset stores its full strict order
(transitively closed), so ``D``/``U`` counts are read straight off the
closure graph. External names only live in the alias table and are used
for display.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import networkx as nx

from app.services.errors import (
    HeightTooSmall,
    NaturalityViolation,
    OutOfRange,
    PosetError,
    PosetParseError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Poset:
    n: int
    strict_order: frozenset
    aliases: tuple = field(default=(), compare=False)

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Closure graph: an edge i -> j for every i < j. Do not mutate."""
        g = nx.DiGraph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.strict_order)
        return g

    @property
    def elements(self):
        return range(1, self.n + 1)

    @property
    def rel_count(self) -> int:
        return len(self.strict_order)

    def relations(self) -> list:
        return sorted(self.strict_order)

    def precedes(self, i: int, j: int) -> bool:
        return (i, j) in self.strict_order

    def below(self, p: int) -> set:
        return set(self.graph.predecessors(p))

    def above(self, p: int) -> set:
        return set(self.graph.successors(p))

    @cached_property
    def minimal(self) -> frozenset:
        return frozenset(p for p in self.elements if self.graph.in_degree(p) == 0)

    @cached_property
    def maximal(self) -> frozenset:
        return frozenset(p for p in self.elements if self.graph.out_degree(p) == 0)

    @cached_property
    def ext(self) -> frozenset:
        return self.minimal | self.maximal

    @cached_property
    def interior(self) -> tuple:
        """P minus Ext(P), ascending."""
        return tuple(p for p in self.elements if p not in self.ext)

    @cached_property
    def height(self) -> int:
        return nx.dag_longest_path_length(self.graph)

    def name(self, p: int) -> str:
        return dict(self.aliases).get(p, str(p))


@dataclass(frozen=True)
class PosetStats:
    rel_count: int
    ext: frozenset
    rel_e: frozenset
    height: int
    covers: frozenset
    components: int

    def to_dict(self) -> dict:
        return {
            'rel_count': self.rel_count,
            'ext': sorted(self.ext),
            'rel_e': [list(pair) for pair in sorted(self.rel_e)],
            'height': self.height,
            'covers': [list(pair) for pair in sorted(self.covers)],
            'components': self.components,
        }


@dataclass(frozen=True)
class UpDownProfile:
    p: int
    d: int
    u: int
    d_e: int
    u_e: int
    b_lower: frozenset  # pairs (l, p), l minimal
    b_upper: frozenset  # pairs (p, b), b maximal

    def to_dict(self) -> dict:
        return {
            'p': self.p,
            'd': self.d,
            'u': self.u,
            'd_e': self.d_e,
            'u_e': self.u_e,
            'b_lower': [list(pair) for pair in sorted(self.b_lower)],
            'b_upper': [list(pair) for pair in sorted(self.b_upper)],
        }


def _check_label(label, n):
    if not isinstance(label, int) or isinstance(label, bool):
        raise OutOfRange(f"element {label!r} is not an integer label")
    if not 1 <= label <= n:
        raise OutOfRange(f"element {label} is outside 1..{n}")


def _check_pair(i, j, n):
    _check_label(i, n)
    _check_label(j, n)
    if i >= j:
        raise NaturalityViolation(
            f"relation {i} < {j} is not naturally labeled (need {i} < {j} as integers)"
        )


def _normalize_aliases(aliases, n) -> tuple:
    if not aliases:
        return ()
    items = aliases.items() if isinstance(aliases, dict) else aliases
    normalized = {}
    for label, display in items:
        label = int(label)
        _check_label(label, n)
        normalized[label] = str(display)
    return tuple(sorted(normalized.items()))


def build_poset(n: int, generators, aliases=None) -> Poset:
    """Transitive closure of ``generators`` on 1..n.

    Accepts covering relations or any set of strict relations; both close
    to the same poset.
    """
    if not isinstance(n, int) or n < 0:
        raise OutOfRange(f"element count must be a non-negative integer, got {n!r}")
    pairs = set()
    for i, j in generators:
        _check_pair(i, j, n)
        pairs.add((i, j))

    g = nx.DiGraph()
    g.add_nodes_from(range(1, n + 1))
    g.add_edges_from(pairs)
    closure = nx.transitive_closure_dag(g)
    return Poset(n, frozenset(closure.edges()), _normalize_aliases(aliases, n))


def stats(P: Poset) -> PosetStats:
    ext = P.ext
    rel_e = frozenset((i, j) for i, j in P.strict_order if i in ext and j in ext)
    covers = frozenset(nx.transitive_reduction(P.graph).edges())
    components = nx.number_connected_components(P.graph.to_undirected())
    return PosetStats(
        rel_count=P.rel_count,
        ext=ext,
        rel_e=rel_e,
        height=P.height,
        covers=covers,
        components=components,
    )


def up_down(P: Poset, p: int) -> UpDownProfile:
    _check_label(p, P.n)
    lower = P.below(p)
    upper = P.above(p)
    b_lower = frozenset((l, p) for l in lower if l in P.minimal)
    b_upper = frozenset((p, b) for b in upper if b in P.maximal)
    return UpDownProfile(
        p=p,
        d=len(lower),
        u=len(upper),
        d_e=len(b_lower),
        u_e=len(b_upper),
        b_lower=b_lower,
        b_upper=b_upper,
    )


def middle_sections(P: Poset, n: int = None) -> list:
    """M_n(P): interiors {p_1 < ... < p_{n-1}} of chains of cardinality n + 1.

    ``n`` defaults to the height of P. Only a height-n poset has chains of
    that length, so any other height gives an empty result. Sections are
    returned as ascending tuples, sorted.
    """
    if n is None:
        n = P.height
    if n < 2:
        raise HeightTooSmall(f"middle sections need height at least 2, got {n}")
    if P.height != n:
        return []

    # Labels ascend along every relation, so 1..n is a topological order.
    depth = {}
    for p in P.elements:
        depth[p] = max((depth[q] + 1 for q in P.graph.predecessors(p)), default=0)
    reach = {}
    for p in reversed(P.elements):
        reach[p] = max((reach[q] + 1 for q in P.graph.successors(p)), default=0)

    on_chain = {p for p in P.elements if depth[p] + reach[p] == n}
    sections = set()

    def extend(chain):
        if len(chain) == n - 1:
            sections.add(tuple(chain))
            return
        last = chain[-1]
        for q in sorted(P.graph.successors(last)):
            if q in on_chain and depth[q] == depth[last] + 1:
                extend(chain + [q])

    for p in sorted(on_chain):
        if depth[p] == 1:
            extend([p])
    return sorted(sections)


def _dot_quote(text: str) -> str:
    return text.replace('\\', '\\\\').replace('"', '\\"')


def hasse_dot(P: Poset, graph_name: str = 'P') -> str:
    """DOT digraph of the Hasse diagram: vertices 1..n, edges the covering relations."""
    lines = [f'digraph {graph_name} {{', '  rankdir=BT;', '  node [shape=circle];']
    for p in P.elements:
        lines.append(f'  {p} [label="{_dot_quote(P.name(p))}"];')
    for i, j in sorted(stats(P).covers):
        lines.append(f'  {i} -> {j};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def _parse_label(token, n, lookup, line_no):
    if token.isdigit():
        label = int(token)
    elif token in lookup:
        label = lookup[token]
    else:
        raise PosetParseError(f"unknown element {token!r}", line_no)
    if not 1 <= label <= n:
        raise PosetParseError(f"element {label} is outside 1..{n}", line_no)
    return label


def parse_poset(text: str) -> Poset:
    """Parse the line-oriented poset format.

    ``n <count>`` header, then relation lines ``1 < 3`` (comma lists and
    chains such as ``1,2 < 3 < 4,5,6`` are accepted) and optional alias
    lines ``name <i> <display-name>``. ``#`` starts a comment.
    """
    n = None
    names = {}
    lookup = {}
    relations = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()

        if tokens[0] == 'n':
            if n is not None:
                raise PosetParseError("duplicate 'n <count>' header", line_no)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise PosetParseError(f"expected 'n <count>', got {line!r}", line_no)
            n = int(tokens[1])
            continue

        if n is None:
            raise PosetParseError("missing 'n <count>' header before this line", line_no)

        if tokens[0] == 'name':
            if len(tokens) != 3:
                raise PosetParseError(f"expected 'name <i> <display-name>', got {line!r}", line_no)
            label = _parse_label(tokens[1], n, lookup, line_no)
            names[label] = tokens[2]
            lookup[tokens[2]] = label
            continue

        if '<' not in line:
            raise PosetParseError(f"expected a relation such as '1 < 3', got {line!r}", line_no)
        groups = [part.strip() for part in line.split('<')]
        if any(not group for group in groups):
            raise PosetParseError(f"relation has an empty side: {line!r}", line_no)

        parsed = [
            [_parse_label(tok.strip(), n, lookup, line_no) for tok in group.split(',')]
            for group in groups
        ]
        for lower, upper in zip(parsed, parsed[1:]):
            for i, j in product(lower, upper):
                try:
                    _check_pair(i, j, n)
                except PosetError as e:
                    raise PosetParseError(str(e), line_no) from e
                relations.append((i, j))

    if n is None:
        raise PosetParseError("missing 'n <count>' header")
    return build_poset(n, relations, names)


def parse_poset_json(data) -> Poset:
    """Parse ``{"n": 6, "relations": [[1, 3], ...], "names": {"5": "5'"}}``."""
    if not isinstance(data, dict):
        raise PosetParseError('poset JSON must be an object')
    n = data.get('n')
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise PosetParseError("poset JSON needs a non-negative integer 'n'")
    relations = data.get('relations', [])
    if not isinstance(relations, list):
        raise PosetParseError("'relations' must be a list of [i, j] pairs")

    pairs = []
    for item in relations:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise PosetParseError(f"relation {item!r} is not an [i, j] pair")
        pairs.append((item[0], item[1]))

    names = data.get('names') or {}
    if not isinstance(names, dict):
        raise PosetParseError("'names' must map labels to display names")
    try:
        return build_poset(n, pairs, {int(k): v for k, v in names.items()})
    except (TypeError, ValueError) as e:
        if isinstance(e, PosetError):
            raise
        raise PosetParseError(f"invalid poset JSON: {e}") from e


def load_poset(source: str) -> Poset:
    """Load a poset from a file path or an inline description.

    Inline text may use ``;`` as a line separator. JSON is detected by a
    leading ``{``.
    """
    if os.path.isfile(source):
        with open(source, 'r') as f:
            text = f.read()
        logger.debug("Read poset description from %s", source)
    else:
        text = source.replace(';', '\n')

    if text.lstrip().startswith('{'):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise PosetParseError(f"invalid JSON: {e.msg}", e.lineno) from e
        return parse_poset_json(data)
    return parse_poset(text)


def poset_to_dict(P: Poset) -> dict:
    data = {'n': P.n, 'relations': [list(pair) for pair in P.relations()]}
    if P.aliases:
        data['names'] = {str(label): display for label, display in P.aliases}
    return data


def poset_to_text(P: Poset) -> str:
    lines = [f'n {P.n}']
    for label, display in P.aliases:
        lines.append(f'name {label} {display}')
    for i, j in sorted(stats(P).covers):
        lines.append(f'{i} < {j}')
    return '\n'.join(lines) + '\n'


def random_poset(n: int, density: float, rng) -> Poset:
    """Closure of a random set of natural pairs; ``rng`` is a ``random.Random``."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < density]
    return build_poset(n, pairs)
