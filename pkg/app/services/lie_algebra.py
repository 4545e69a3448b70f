"""Bases and symbolic commutator matrices of Lie poset algebras.

The nilpotent algebra is spanned by E_{i,j} with i < j in the poset, the
solvable one adds every diagonal E_{p,p}. Brackets follow the matrix-unit
rule E_{i,j} E_{k,l} = delta_{j,k} E_{i,l}.
"""
from dataclasses import dataclass, field
from functools import cached_property

from app.services.errors import PosetParseError
from app.services.poset_core import Poset, up_down


@dataclass(frozen=True, order=True)
class BasisElement:
    row: int
    col: int

    @property
    def symbol_name(self) -> str:
        return f"E_{self.row}_{self.col}"

    def format(self, names=None) -> str:
        names = names or {}
        return f"E_{{{names.get(self.row, self.row)},{names.get(self.col, self.col)}}}"

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class LinearForm:
    # sorted (BasisElement, coefficient) pairs, no zero coefficients
    terms: tuple = ()

    @classmethod
    def of(cls, mapping: dict) -> 'LinearForm':
        return cls(tuple(sorted((e, c) for e, c in mapping.items() if c != 0)))

    @classmethod
    def basis(cls, element: BasisElement, coefficient: int = 1) -> 'LinearForm':
        return cls.of({element: coefficient})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __neg__(self):
        return LinearForm(tuple((e, -c) for e, c in self.terms))

    def __add__(self, other: 'LinearForm') -> 'LinearForm':
        combined = self.as_dict()
        for e, c in other.terms:
            combined[e] = combined.get(e, 0) + c
        return LinearForm.of(combined)

    def __sub__(self, other: 'LinearForm') -> 'LinearForm':
        return self + (-other)

    def scale(self, factor: int) -> 'LinearForm':
        return LinearForm.of({e: c * factor for e, c in self.terms})

    def evaluate(self, values: dict, modulus: int) -> int:
        return sum(c * values[e] for e, c in self.terms) % modulus

    def format(self, names=None) -> str:
        if not self.terms:
            return '0'
        parts = []
        for e, c in self.terms:
            sign = '-' if c < 0 else '+'
            magnitude = '' if abs(c) == 1 else str(abs(c))
            parts.append((sign, f"{magnitude}{e.format(names)}"))
        first_sign, first = parts[0]
        text = ('-' if first_sign == '-' else '') + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.format()

    def to_list(self) -> list:
        return [[c, [e.row, e.col]] for e, c in self.terms]


ZERO = LinearForm()


def bracket(a: BasisElement, b: BasisElement, basis=None) -> LinearForm:
    """[a, b] = delta(a.col, b.row) E_{a.row, b.col} - delta(b.col, a.row) E_{b.row, a.col}.

    With ``basis`` given, terms outside it are dropped.
    """
    terms = {}
    if a.col == b.row:
        e = BasisElement(a.row, b.col)
        terms[e] = terms.get(e, 0) + 1
    if b.col == a.row:
        e = BasisElement(b.row, a.col)
        terms[e] = terms.get(e, 0) - 1
    if basis is not None:
        terms = {e: c for e, c in terms.items() if e in basis}
    return LinearForm.of(terms)


def bracket_forms(x: LinearForm, y: LinearForm) -> LinearForm:
    """Bilinear extension of ``bracket`` to linear forms."""
    result = ZERO
    for a, ca in x.terms:
        for b, cb in y.terms:
            result = result + bracket(a, b).scale(ca * cb)
    return result


def nilpotent_basis(P: Poset, ordering: str = 'lex') -> list:
    """Basis of the nilpotent algebra; with ``ordering='block'`` the row order of the block layout."""
    basis = [BasisElement(i, j) for i, j in P.relations()]
    if ordering == 'block':
        return _block_orders(P, basis)[0]
    return basis


def solvable_basis(P: Poset, ordering: str = 'lex') -> list:
    basis = [BasisElement(p, p) for p in P.elements] + nilpotent_basis(P)
    if ordering == 'block':
        return _block_orders(P, basis)[0]
    return basis


def _block_orders(P: Poset, basis: list) -> tuple:
    """Row and column orders of the block layout used for height-two posets.

    Rows: lower blocks B_p for interior p ascending, then upper blocks B^p,
    then relations between extremal elements. Columns swap the first two
    groups. Anything else (diagonals, interior-to-interior pairs) follows
    in basis order.
    """
    lower, upper = [], []
    for p in P.interior:
        profile = up_down(P, p)
        lower.extend(BasisElement(l, q) for l, q in sorted(profile.b_lower))
        upper.extend(BasisElement(q, b) for q, b in sorted(profile.b_upper))
    extremal = [
        BasisElement(i, j) for i, j in P.relations() if i in P.ext and j in P.ext
    ]
    listed = set(lower) | set(upper) | set(extremal)
    rest = [e for e in basis if e not in listed]
    return lower + upper + extremal + rest, upper + lower + extremal + rest


def label_orders(P: Poset, variant: str = 'nilpotent', ordering: str = 'lex') -> tuple:
    basis = solvable_basis(P) if variant == 'solvable' else nilpotent_basis(P)
    if ordering == 'block':
        return _block_orders(P, basis)
    if ordering != 'lex':
        raise ValueError(f"unknown ordering {ordering!r}")
    return basis, list(basis)


@dataclass(frozen=True)
class SymbolicMatrix:
    row_labels: tuple
    col_labels: tuple
    entries: tuple  # rows of LinearForm
    variant: str = 'nilpotent'
    names: tuple = field(default=(), compare=False)

    @property
    def shape(self) -> tuple:
        return len(self.row_labels), len(self.col_labels)

    @property
    def size(self) -> int:
        return len(self.row_labels)

    @cached_property
    def _row_index(self) -> dict:
        return {label: i for i, label in enumerate(self.row_labels)}

    @cached_property
    def _col_index(self) -> dict:
        return {label: j for j, label in enumerate(self.col_labels)}

    def entry(self, a: BasisElement, b: BasisElement) -> LinearForm:
        return self.entries[self._row_index[a]][self._col_index[b]]

    def symbols(self) -> list:
        found = set()
        for row in self.entries:
            for form in row:
                found.update(e for e, _ in form.terms)
        return sorted(found)

    def is_skew_symmetric(self) -> bool:
        if set(self.row_labels) != set(self.col_labels):
            return False
        for a in self.row_labels:
            for b in self.col_labels:
                if self.entry(a, b) + self.entry(b, a):
                    return False
        return True

    def nonzero_view(self) -> 'SymbolicMatrix':
        """Drop zero rows and zero columns."""
        keep_rows = [i for i, row in enumerate(self.entries) if any(row)]
        keep_cols = [
            j for j in range(len(self.col_labels))
            if any(self.entries[i][j] for i in range(len(self.row_labels)))
        ]
        return SymbolicMatrix(
            row_labels=tuple(self.row_labels[i] for i in keep_rows),
            col_labels=tuple(self.col_labels[j] for j in keep_cols),
            entries=tuple(tuple(self.entries[i][j] for j in keep_cols) for i in keep_rows),
            variant=self.variant,
            names=self.names,
        )


def commutator_matrix(P: Poset, variant: str = 'nilpotent', ordering: str = 'lex') -> SymbolicMatrix:
    rows, cols = label_orders(P, variant, ordering)
    basis = set(rows)
    entries = tuple(tuple(bracket(a, b, basis) for b in cols) for a in rows)
    return SymbolicMatrix(
        row_labels=tuple(rows),
        col_labels=tuple(cols),
        entries=entries,
        variant=variant,
        names=P.aliases,
    )


def restrict_rows(M: SymbolicMatrix, rows, columns) -> SymbolicMatrix:
    """Rows ``rows`` of M with every entry outside ``columns`` set to zero."""
    columns = set(columns)
    entries = tuple(
        tuple(
            M.entry(a, b) if b in columns else ZERO
            for b in M.col_labels
        )
        for a in rows
    )
    return SymbolicMatrix(tuple(rows), M.col_labels, entries, M.variant, M.names)


def sl2_borel_matrix() -> SymbolicMatrix:
    """Commutator matrix of the upper-triangular subalgebra of sl(2).

    Basis {x1, x2} with [x1, x2] = 2 x2; x1 and x2 are carried by the
    symbols E_{1,1} and E_{1,2}.
    """
    x1, x2 = BasisElement(1, 1), BasisElement(1, 2)
    entries = (
        (ZERO, LinearForm.basis(x2, 2)),
        (LinearForm.basis(x2, -2), ZERO),
    )
    return SymbolicMatrix((x1, x2), (x1, x2), entries, variant='solvable')


def render_matrix(M: SymbolicMatrix, bold: bool = False) -> str:
    """Bordered text rendering with labels on the top and left edges."""
    names = dict(M.names)
    grid = [[''] + [e.format(names) for e in M.col_labels]]
    grid += [
        [a.format(names)] + [form.format(names) for form in row]
        for a, row in zip(M.row_labels, M.entries)
    ]
    widths = [max(len(cells[j]) for cells in grid) for j in range(len(grid[0]))]

    lines = []
    for i, cells in enumerate(grid):
        padded = [cell.ljust(width) for cell, width in zip(cells, widths)]
        if bold:
            labels = range(1, len(padded)) if i == 0 else range(1)
            for j in labels:
                padded[j] = f"\033[1m{padded[j]}\033[0m"
        lines.append('  '.join(padded).rstrip())
    return '\n'.join(lines) + '\n'


def matrix_to_dict(M: SymbolicMatrix) -> dict:
    data = {
        'variant': M.variant,
        'row_labels': [[e.row, e.col] for e in M.row_labels],
        'col_labels': [[e.row, e.col] for e in M.col_labels],
        'entries': [[form.to_list() for form in row] for row in M.entries],
    }
    if M.names:
        data['names'] = {str(label): display for label, display in M.names}
    return data


def matrix_from_dict(data: dict) -> SymbolicMatrix:
    """Inverse of ``matrix_to_dict``."""
    try:
        rows = tuple(BasisElement(int(i), int(j)) for i, j in data['row_labels'])
        cols = tuple(BasisElement(int(i), int(j)) for i, j in data['col_labels'])
        entries = tuple(
            tuple(
                LinearForm.of({BasisElement(int(i), int(j)): int(c) for c, (i, j) in cell})
                for cell in row
            )
            for row in data['entries']
        )
        names = tuple(sorted((int(k), str(v)) for k, v in (data.get('names') or {}).items()))
    except (KeyError, TypeError, ValueError) as e:
        raise PosetParseError(f"invalid matrix JSON: {e}") from e
    if len(entries) != len(rows) or any(len(row) != len(cols) for row in entries):
        raise PosetParseError('invalid matrix JSON: entries do not match the label lists')
    return SymbolicMatrix(rows, cols, entries, data.get('variant', 'nilpotent'), names)
