"""Second Jacobian matrices, labeled submatrices, and their determinants.

Rows are labeled by ``k`` in ``0..n`` (the unit vectors, with 0 the zero
vector) and columns by canonical pairs ``(i, j)`` with ``0 <= i <= j <= n``
not both zero, ordered ``(0,1) .. (0,n), (1,1), (1,2) .. (n,n)``.

Two determinant engines are provided.  ``cofactor_det`` is plain Laplace
expansion along the first row and serves as the reference.  The optimized
engine peels diagonal blocks off a labeled submatrix by row/column
permutations (:func:`block_triangularize`) and expands only the small
terminal block.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import HypothesisViolation, LabelError
from .gbasis import Ideal
from .polyring import Partials, Polynomial, format_poly

RowLabel = int
ColumnLabel = tuple  # (i, j) with i <= j

THREADS_ENV = "NASHKIT_THREADS"


def column_label(i: int, j: int) -> ColumnLabel:
    """Canonical column label: the pair ``(j, i)`` is identified with ``(i, j)``."""
    if i > j:
        i, j = j, i
    if i < 0 or j == 0:
        raise LabelError(f"invalid column label ({i}, {j})")
    return (i, j)


def column_labels(n: int) -> list[ColumnLabel]:
    return [(0, j) for j in range(1, n + 1)] + [
        (i, j) for i in range(1, n + 1) for j in range(i, n + 1)
    ]


def row_labels(n: int) -> list[RowLabel]:
    return list(range(n + 1))


def entry_rule(k: int, col: ColumnLabel) -> tuple | None:
    """Which derivative sits at row ``k``, column ``col``.

    Returns ``("half", i, i)`` for one half of a pure second partial,
    ``("second", i, j)``, ``("first", j)``, or ``None`` for a zero entry.
    The column ``(0, j)`` reads its row-0 entry as the first partial ``f_j``.
    """
    i, j = col
    if k == 0:
        if i == j:
            return ("half", i, i)
        if i == 0:
            return ("first", j)
        return ("second", i, j)
    if k == i:
        return ("first", j)
    if k == j and i > 0:
        return ("first", i)
    return None


def entry_symbol(k: int, col: ColumnLabel) -> str:
    rule = entry_rule(k, col)
    if rule is None:
        return "0"
    sep = "," if col[1] >= 10 else ""
    if rule[0] == "half":
        return f"1/2*f{rule[1]}{sep}{rule[2]}"
    if rule[0] == "second":
        return f"f{rule[1]}{sep}{rule[2]}"
    return f"f{rule[1]}"


def _label_text(col: ColumnLabel) -> str:
    sep = "," if col[1] >= 10 else ""
    return f"β{col[0]}{sep}{col[1]}"


@dataclass
class Jacobian2Matrix:
    """The labeled ``(n+1) x (n + n(n+1)/2)`` second Jacobian matrix of ``F``."""

    n: int
    F: Polynomial
    rows: list[RowLabel]
    cols: list[ColumnLabel]
    entries: list[list[Polynomial]]
    partials: Partials = field(repr=False)

    def __post_init__(self):
        self._row_index = {r: a for a, r in enumerate(self.rows)}
        self._col_index = {c: b for b, c in enumerate(self.cols)}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def entry(self, row: RowLabel, col: Sequence[int]) -> Polynomial:
        col = column_label(*col)
        try:
            return self.entries[self._row_index[row]][self._col_index[col]]
        except KeyError:
            raise LabelError(f"no entry ({row}, {col}) in a matrix with n={self.n}") from None

    def column(self, col: Sequence[int]) -> list[Polynomial]:
        b = self._col_index[column_label(*col)]
        return [row[b] for row in self.entries]

    def has_row(self, row: RowLabel) -> bool:
        return row in self._row_index

    def has_col(self, col: ColumnLabel) -> bool:
        return col in self._col_index

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rows": list(self.rows),
            "cols": [list(c) for c in self.cols],
            "entries": [[format_poly(p) for p in row] for row in self.entries],
        }

    def render(self) -> str:
        cells = [[format_poly(p) for p in row] for row in self.entries]
        return render_table(self.rows, self.cols, cells)


def render_table(rows: Sequence[int], cols: Sequence[ColumnLabel], cells: Sequence[Sequence[str]]) -> str:
    header = [""] + [_label_text(c) for c in cols]
    body = [[f"β{r}"] + list(row) for r, row in zip(rows, cells)]
    widths = [max(len(line[c]) for line in [header] + body) for c in range(len(header))]
    lines = ["  ".join(s.rjust(w) for s, w in zip(line, widths)) for line in [header] + body]
    return "\n".join(line.rstrip() for line in lines)


def build_jac2(F: Polynomial) -> Jacobian2Matrix:
    n = F.n
    partials = Partials(F)
    rows, cols = row_labels(n), column_labels(n)
    zero = Polynomial.zero(n)
    half = mpq(1, 2)

    def cell(k: int, col: ColumnLabel) -> Polynomial:
        rule = entry_rule(k, col)
        if rule is None:
            return zero
        if rule[0] == "half":
            return partials.second(rule[1], rule[2]).scale(half)
        if rule[0] == "second":
            return partials.second(rule[1], rule[2])
        return partials.first(rule[1])

    entries = [[cell(k, c) for c in cols] for k in rows]
    return Jacobian2Matrix(n, F, rows, cols, entries, partials)


def symbolic_jac2(n: int) -> dict:
    """Symbolic layout of the matrix, with entries written as ``f_k``/``f_kl``."""
    rows, cols = row_labels(n), column_labels(n)
    cells = [[entry_symbol(k, c) for c in cols] for k in rows]
    return {"n": n, "rows": rows, "cols": [list(c) for c in cols], "entries": cells, "text": render_table(rows, cols, cells)}


# -- labeled submatrices -----------------------------------------------------------


@dataclass
class LabeledSubmatrix:
    parent: Jacobian2Matrix = field(repr=False)
    rows: list[RowLabel]
    cols: list[ColumnLabel]
    entries: list[list[Polynomial]] = field(repr=False)

    @property
    def size(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)

    @property
    def frequencies(self) -> Counter:
        """``m_i``: occurrences of each index among the column labels."""
        freq: Counter = Counter()
        for i, j in self.cols:
            freq[i] += 1
            freq[j] += 1
        return freq

    def row_indices(self) -> set[int]:
        return {r for r in self.rows if r}

    def column_indices(self) -> set[int]:
        return {i for c in self.cols for i in c}

    def restrict(self, rows: Sequence[RowLabel], cols: Sequence[ColumnLabel]) -> "LabeledSubmatrix":
        return submatrix(self.parent, rows, cols, allow_duplicate_columns=True)

    def without(self, rows: Iterable[RowLabel] = (), cols: Iterable[ColumnLabel] = ()) -> "LabeledSubmatrix":
        """Remove the given rows and columns, keeping the remaining order."""
        rows, cols = set(rows), [column_label(*c) for c in cols]
        keep_cols = list(self.cols)
        for c in cols:
            keep_cols.remove(c)
        return self.restrict([r for r in self.rows if r not in rows], keep_cols)

    def determinant(self, engine: str = "optimized") -> Polynomial:
        return determinant(self, engine)

    def labels_json(self) -> list[list[int]]:
        return [list(c) for c in self.cols]


def submatrix(
    M: Jacobian2Matrix,
    rows: Sequence[RowLabel] | None,
    cols: Sequence[Sequence[int]],
    allow_duplicate_columns: bool = False,
) -> LabeledSubmatrix:
    """Select rows and columns by label.

    Labels keep the order in which they are requested, which fixes the sign
    of the determinant; ``rows=None`` selects every row.
    """
    rows = list(M.rows) if rows is None else list(rows)
    cols = [column_label(*c) for c in cols]
    for r in rows:
        if not M.has_row(r):
            raise LabelError(f"unknown row label β{r}")
    for c in cols:
        if not M.has_col(c):
            raise LabelError(f"unknown column label {_label_text(c)}")
    if len(set(rows)) != len(rows):
        raise LabelError("duplicate row label")
    if not allow_duplicate_columns and len(set(cols)) != len(cols):
        raise LabelError("duplicate column label")
    entries = [[M.entry(r, c) for c in cols] for r in rows]
    return LabeledSubmatrix(M, rows, cols, entries)


# -- block triangularization ------------------------------------------------------


@dataclass
class DiagonalBlock:
    rows: list[RowLabel]
    cols: list[ColumnLabel]
    diagonal: list[Polynomial]
    step: int  # 1: indices seen once, 2: indices seen twice in a single label

    def determinant(self, n: int) -> Polynomial:
        out = Polynomial.one(n)
        for d in self.diagonal:
            out = out * d
        return out


@dataclass
class BlockDecomposition:
    """Permutation equivalence of a submatrix with a block upper triangular one.

    ``row_order``/``col_order`` list the source labels top-to-bottom and
    left-to-right after permuting: the terminal block ``D`` first, then the
    diagonal blocks in reverse peel order.  ``blocks[0]`` is the first block
    peeled.  ``singular`` carries a reason when the peeling proves that the
    determinant vanishes (a zero row, two rows supported on one column, or a
    repeated column).
    """

    source: LabeledSubmatrix
    blocks: list[DiagonalBlock]
    terminal: LabeledSubmatrix | None
    row_order: list[RowLabel]
    col_order: list[ColumnLabel]
    parity: int
    singular: str | None = None

    def determinant(self, engine: str = "cofactor") -> Polynomial:
        n = self.source.parent.n
        if self.singular:
            return Polynomial.zero(n)
        det = _det_entries(self.terminal.entries, n, engine)
        for b in self.blocks:
            det = det * b.determinant(n)
        return det if self.parity > 0 else -det

    def terminal_frequencies(self) -> dict[int, int]:
        if self.terminal is None:
            return {}
        freq = self.terminal.frequencies
        return {i: freq[i] for i in sorted(self.terminal.row_indices())}

    def permuted_entries(self) -> list[list[Polynomial]]:
        src = self.source
        ri = {r: a for a, r in enumerate(src.rows)}
        ci = {}
        for b, c in enumerate(src.cols):
            ci.setdefault(c, b)
        return [[src.entries[ri[r]][ci[c]] for c in self.col_order] for r in self.row_order]


def satisfies_block_hypothesis(S: LabeledSubmatrix) -> bool:
    """Rows ``{0} u S``, every column label ``(a, b)`` with ``a, b`` in ``S``."""
    if not S.is_square() or 0 not in S.rows:
        return False
    idx = S.row_indices()
    return all(i >= 1 and i in idx and j in idx for i, j in S.cols)


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a list of distinct integers."""
    seen = [False] * len(perm)
    pos = {v: a for a, v in enumerate(sorted(perm))}
    p = [pos[v] for v in perm]
    sign = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def block_triangularize(S: LabeledSubmatrix) -> BlockDecomposition:
    """Peel diagonal blocks off ``S`` until the frequency condition holds.

    Step 1 removes, for every row index that occurs once among the column
    labels, that row together with its unique column.  Step 2 removes every
    row index ``w`` occurring twice but only in ``(w, w)``.  Both steps repeat
    until neither applies; what remains is the terminal block ``D``.
    """
    if not satisfies_block_hypothesis(S):
        raise HypothesisViolation(
            "block triangularization needs rows {0} u S and column indices drawn from S"
        )

    def fail(reason: str) -> BlockDecomposition:
        return BlockDecomposition(S, [], None, list(S.rows), list(S.cols), 1, reason)

    if len(set(S.cols)) != len(S.cols):
        return fail("repeated column")
    entry = {(r, c): S.entries[a][b] for a, r in enumerate(S.rows) for b, c in enumerate(S.cols)}
    rows_left = [r for r in S.rows]
    cols_left = list(S.cols)
    blocks: list[DiagonalBlock] = []
    while True:
        freq: Counter = Counter()
        for i, j in cols_left:
            freq[i] += 1
            freq[j] += 1
        live = [r for r in rows_left if r]
        zero_rows = [r for r in live if not freq[r]]
        if zero_rows:
            return fail(f"row β{zero_rows[0]} is zero")
        once = sorted(r for r in live if freq[r] == 1)
        if once:
            owner = {}
            for u in once:
                col = next(c for c in cols_left if u in c)
                if col in owner:
                    return fail(f"rows β{owner[col]} and β{u} are supported on the single column {_label_text(col)}")
                owner[col] = u
            picked = [next(c for c in cols_left if u in c) for u in once]
            blocks.append(DiagonalBlock(once, picked, [entry[(u, c)] for u, c in zip(once, picked)], 1))
        else:
            twice = sorted(r for r in live if freq[r] == 2 and (r, r) in cols_left)
            if not twice:
                break
            picked = [(w, w) for w in twice]
            blocks.append(DiagonalBlock(twice, picked, [entry[(w, (w, w))] for w in twice], 2))
        gone_rows = set(blocks[-1].rows)
        rows_left = [r for r in rows_left if r not in gone_rows]
        for c in blocks[-1].cols:
            cols_left.remove(c)

    terminal = S.restrict(rows_left, cols_left)
    row_order = list(rows_left)
    col_order = list(cols_left)
    for b in reversed(blocks):
        row_order += b.rows
        col_order += b.cols
    rpos = {r: a for a, r in enumerate(S.rows)}
    cpos = {c: b for b, c in enumerate(S.cols)}
    parity = permutation_sign([rpos[r] for r in row_order]) * permutation_sign([cpos[c] for c in col_order])
    return BlockDecomposition(S, blocks, terminal, row_order, col_order, parity)


def frequency_dichotomy(D: LabeledSubmatrix) -> bool:
    """Either one index with ``m = 4`` or two with ``m = 3``, all others 2, size >= 3."""
    freq = D.frequencies
    ms = sorted((freq[i] for i in D.row_indices()), reverse=True)
    if len(D.rows) < 3 or not ms:
        return False
    if ms[0] == 4:
        return all(m == 2 for m in ms[1:])
    if ms[0] == 3:
        return len(ms) >= 2 and ms[1] == 3 and all(m == 2 for m in ms[2:])
    return False


# -- determinants --------------------------------------------------------------------


def cofactor_det(entries: Sequence[Sequence[Polynomial]], n: int | None = None) -> Polynomial:
    """Laplace expansion along the first row (reference engine)."""
    size = len(entries)
    if any(len(row) != size for row in entries):
        raise ValueError("determinant of a non-square matrix")
    if n is None:
        n = entries[0][0].n if size else 1
    if size == 0:
        return Polynomial.one(n)
    if size == 1:
        return entries[0][0]
    total = Polynomial.zero(n)
    for b, a0b in enumerate(entries[0]):
        if a0b.is_zero():
            continue
        minor = [row[:b] + row[b + 1:] for row in entries[1:]]
        term = a0b * cofactor_det(minor, n)
        total = total - term if b % 2 else total + term
    return total


def sparse_det(entries: Sequence[Sequence[Polynomial]], n: int | None = None) -> Polynomial:
    """Laplace expansion along the sparsest row or column."""
    size = len(entries)
    if any(len(row) != size for row in entries):
        raise ValueError("determinant of a non-square matrix")
    if n is None:
        n = entries[0][0].n if size else 1
    if size == 0:
        return Polynomial.one(n)
    if size == 1:
        return entries[0][0]
    row_nz = [[b for b, v in enumerate(row) if v] for row in entries]
    col_nz = [[a for a in range(size) if entries[a][b]] for b in range(size)]
    best_row = min(range(size), key=lambda a: len(row_nz[a]))
    best_col = min(range(size), key=lambda b: len(col_nz[b]))
    total = Polynomial.zero(n)
    if len(row_nz[best_row]) <= len(col_nz[best_col]):
        a = best_row
        for b in row_nz[a]:
            minor = [row[:b] + row[b + 1:] for k, row in enumerate(entries) if k != a]
            term = entries[a][b] * sparse_det(minor, n)
            total = total - term if (a + b) % 2 else total + term
    else:
        b = best_col
        for a in col_nz[b]:
            minor = [row[:b] + row[b + 1:] for k, row in enumerate(entries) if k != a]
            term = entries[a][b] * sparse_det(minor, n)
            total = total - term if (a + b) % 2 else total + term
    return total


def _det_entries(entries, n: int, engine: str) -> Polynomial:
    if engine == "cofactor":
        return cofactor_det(entries, n)
    return sparse_det(entries, n)


def determinant(S: LabeledSubmatrix | Sequence[Sequence[Polynomial]], engine: str = "optimized") -> Polynomial:
    """Exact symbolic determinant.

    ``engine="cofactor"`` is the reference; ``"optimized"`` uses the block
    decomposition whenever its hypothesis holds, strips a ``(0, k)`` column
    (supported on row 0 only) otherwise, and falls back to sparse Laplace.
    """
    if engine not in ("optimized", "cofactor"):
        raise ValueError(f"unknown determinant engine {engine!r}")
    if not isinstance(S, LabeledSubmatrix):
        if engine == "cofactor":
            return cofactor_det(S)
        return sparse_det(S)
    if not S.is_square():
        raise ValueError(f"determinant of a non-square {S.size[0]}x{S.size[1]} matrix")
    n = S.parent.n
    if engine == "cofactor":
        return cofactor_det(S.entries, n)
    return _optimized_det(S)[0]


def _optimized_det(S: LabeledSubmatrix) -> tuple[Polynomial, BlockDecomposition | None]:
    n = S.parent.n
    if satisfies_block_hypothesis(S):
        dec = block_triangularize(S)
        return dec.determinant("sparse"), dec
    zero_cols = [b for b, c in enumerate(S.cols) if c[0] == 0]
    if zero_cols and 0 in S.rows:
        if len(zero_cols) > 1:
            return Polynomial.zero(n), None
        b = zero_cols[0]
        a = S.rows.index(0)
        rest = S.restrict([r for r in S.rows if r != 0], S.cols[:b] + S.cols[b + 1:])
        det = S.entries[a][b] * sparse_det(rest.entries, n)
        return (-det if (a + b) % 2 else det), None
    return sparse_det(S.entries, n), None


# -- maximal minors -----------------------------------------------------------------


@dataclass
class MinorRecord:
    selection: tuple[ColumnLabel, ...]
    det: Polynomial
    terminal_frequencies: dict[int, int] | None = None
    dichotomy: bool | None = None

    def to_json(self) -> dict:
        return {"selection": [list(c) for c in self.selection], "det": format_poly(self.det)}


def selection_is_degenerate(selection: Sequence[ColumnLabel], n: int) -> bool:
    """Cheap vanishing test: a zero row ``β_s``, or two ``(0, k)`` columns."""
    if sum(1 for c in selection if c[0] == 0) > 1:
        return True
    touched = {i for c in selection if c[0] > 0 for i in c}
    return len(touched) < n


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _minor_chunk(F: Polynomial, combos: list[tuple[int, ...]]) -> list[MinorRecord]:
    M = build_jac2(F)
    out = []
    for combo in combos:
        sel = tuple(M.cols[c] for c in combo)
        S = submatrix(M, None, sel)
        det, dec = _optimized_det(S)
        rec = MinorRecord(sel, det)
        if dec is not None and dec.terminal is not None:
            rec.terminal_frequencies = dec.terminal_frequencies()
            rec.dichotomy = frequency_dichotomy(dec.terminal)
        out.append(rec)
    return out


def enumerate_minors(F: Polynomial, workers: int | None = None, keep_zero: bool = False) -> list[MinorRecord]:
    """Every nondegenerate maximal minor, in lexicographic selection order."""
    n = F.n
    cols = column_labels(n)
    combos = [
        combo
        for combo in itertools.combinations(range(len(cols)), n + 1)
        if not selection_is_degenerate([cols[c] for c in combo], n)
    ]
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(combos) > 64:
        size = -(-len(combos) // workers)
        chunks = [combos[a:a + size] for a in range(0, len(combos), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_minor_chunk, [F] * len(chunks), chunks))
        records = [r for part in parts for r in part]
    else:
        records = _minor_chunk(F, combos)
    return records if keep_zero else [r for r in records if not r.det.is_zero()]


def minor_selection_count(n: int) -> int:
    return comb(n + n * (n + 1) // 2, n + 1)


def maximal_minors(F: Polynomial, workers: int | None = None) -> Ideal:
    """Generators of the second Jacobian ideal (zeros and duplicates dropped)."""
    return Ideal(F.n, [r.det for r in enumerate_minors(F, workers)])


def matrix_json(M: Jacobian2Matrix) -> str:
    return json.dumps(M.to_json())
