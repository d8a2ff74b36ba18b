"""Exact linear algebra over the rationals via fraction-free elimination.

Matrices are given column-sparse: a list of ``{row: Fraction}`` dicts.  Each
column is scaled to integers, rows are eliminated with Bareiss' one-step
fraction-free rule, and pivots are always the first available row in a
fixed column order, so the output depends only on the input.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm


class SparseMatrix:
    """Column-sparse exact matrix with a fixed shape."""

    __slots__ = ("nrows", "ncols", "columns")

    def __init__(self, nrows: int, columns: list):
        self.nrows = nrows
        self.columns = [dict(c) for c in columns]
        self.ncols = len(self.columns)

    @classmethod
    def from_dense(cls, rows: list) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [
            {i: Fraction(rows[i][j]) for i in range(nrows) if rows[i][j]} for j in range(ncols)
        ]
        return cls(nrows, cols)

    def to_dense(self) -> list:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not any(self.columns)

    def triplets(self) -> list:
        """``(row, col, value)`` for every nonzero entry, column-major."""
        return [(i, j, v) for j, col in enumerate(self.columns) for i, v in sorted(col.items())]

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = []
        for col in other.columns:
            acc = {}
            for k, b in col.items():
                for i, a in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + a * b
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, cols)


def _integer_rows(nrows: int, columns: list, extra=None) -> list:
    """Dense integer rows; each column (and ``extra``) scaled by its denominator lcm."""
    cols = list(columns) + ([extra] if extra is not None else [])
    rows = [[0] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        if not col:
            continue
        den = lcm(*(Fraction(v).denominator for v in col.values()))
        for i, v in col.items():
            v = Fraction(v)
            rows[i][j] = v.numerator * (den // v.denominator)
    return rows


def _scales(columns: list) -> list:
    return [lcm(*(Fraction(v).denominator for v in c.values())) if c else 1 for c in columns]


def bareiss_echelon(rows: list, ncols: int | None = None, stop_col: int | None = None):
    """Fraction-free row echelon form, in place.

    Returns the list of pivot columns; pivot ``k`` sits in row ``k``.
    Columns at index ``>= stop_col`` are carried along but never pivoted.
    """
    if not rows:
        return []
    n = len(rows[0]) if ncols is None else ncols
    limit = n if stop_col is None else stop_col
    pivots = []
    prev = 1
    r = 0
    nr = len(rows)
    for c in range(limit):
        if r == nr:
            break
        piv_row = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv_row is None:
            continue
        if piv_row != r:
            rows[r], rows[piv_row] = rows[piv_row], rows[r]
        pr = rows[r]
        p = pr[c]
        for i in range(r + 1, nr):
            ri = rows[i]
            a = ri[c]
            if a:
                rows[i] = [(p * ri[k] - a * pr[k]) // prev for k in range(n)]
            elif p != prev:
                rows[i] = [(p * v) // prev for v in ri]
        prev = p
        pivots.append(c)
        r += 1
    return pivots


def blocks(m: SparseMatrix, seed_rows=None) -> list:
    """Connected components of the row/column incidence graph.

    Returns ``[(rows, cols)]`` with both lists sorted.  Zero columns form
    singleton blocks with no rows.  With ``seed_rows`` only the blocks
    touching those rows are returned.
    """
    parent = list(range(m.nrows))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for col in m.columns:
        it = iter(col)
        first = next(it, None)
        if first is None:
            continue
        r0 = find(first)
        for i in it:
            ri = find(i)
            if ri != r0:
                parent[ri] = r0
    groups = {}
    for j, col in enumerate(m.columns):
        key = find(next(iter(col))) if col else ("c", j)
        groups.setdefault(key, ([], []))[1].append(j)
    for i in range(m.nrows):
        r = find(i)
        if r in groups:
            groups[r][0].append(i)
    if seed_rows is not None:
        wanted = {find(i) for i in seed_rows}
        return [v for k, v in groups.items() if k in wanted]
    return list(groups.values())


def _sub(m: SparseMatrix, rows, cols) -> SparseMatrix:
    pos = {r: k for k, r in enumerate(rows)}
    return SparseMatrix(len(rows), [{pos[i]: v for i, v in m.columns[j].items()} for j in cols])


def _dense_rank(m: SparseMatrix) -> int:
    rows = [row for row in _integer_rows(m.nrows, m.columns) if any(row)]
    return len(bareiss_echelon(rows, m.ncols))


def rank(m: SparseMatrix) -> int:
    return sum(_dense_rank(_sub(m, r, c)) for r, c in blocks(m) if r)


def _back_substitute(rows, pivots, rhs_col, ncols):
    """Solution with free variables 0 of the echelon system ``rows``."""
    x = [Fraction(0)] * ncols
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        row = rows[k]
        s = Fraction(row[rhs_col]) if rhs_col is not None else Fraction(0)
        for j in pivots[k + 1:]:
            if row[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def _dense_solve(m: SparseMatrix, b: dict) -> list | None:
    scales = _scales(m.columns)
    bden = lcm(*(Fraction(v).denominator for v in b.values()))
    rows = _integer_rows(m.nrows, m.columns, b)
    rows = [row for row in rows if any(row)]
    pivots = bareiss_echelon(rows, m.ncols + 1, stop_col=m.ncols)
    for row in rows[len(pivots):]:
        if row[m.ncols]:
            return None
    y = _back_substitute(rows, pivots, m.ncols, m.ncols)
    # integer column j is scales[j] times column j, the rhs is bden * b
    return [y[j] * scales[j] / bden for j in range(m.ncols)]


def solve(m: SparseMatrix, b: dict) -> list | None:
    """One rational solution of ``m x = b`` or None.

    Free variables are zero, pivots are chosen in column order; only the
    blocks that meet the support of ``b`` are eliminated.
    """
    x = [Fraction(0)] * m.ncols
    b = {i: Fraction(v) for i, v in b.items() if v}
    if not b:
        return x
    covered = set()
    for rows, cols in blocks(m, seed_rows=b):
        covered.update(rows)
        pos = {r: k for k, r in enumerate(rows)}
        part = _dense_solve(_sub(m, rows, cols), {pos[i]: b[i] for i in rows if i in b})
        if part is None:
            return None
        for j, v in zip(cols, part):
            x[j] = v
    if any(i not in covered for i in b):
        return None
    return x


def _dense_nullspace(m: SparseMatrix) -> list:
    scales = _scales(m.columns)
    rows = [row for row in _integer_rows(m.nrows, m.columns) if any(row)]
    pivots = bareiss_echelon(rows, m.ncols)
    pivset = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        y = [Fraction(0)] * m.ncols
        y[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = rows[k]
            s = -Fraction(row[f])
            for j in pivots[k + 1:]:
                if row[j]:
                    s -= row[j] * y[j]
            y[c] = s / row[c]
        basis.append((f, {j: y[j] * scales[j] for j in range(m.ncols) if y[j]}))
    return basis


def nullspace(m: SparseMatrix) -> list:
    """Kernel basis as sparse ``{col: value}`` dicts, one per free column,
    ordered by free column."""
    out = []
    for rows, cols in blocks(m):
        for f, vec in _dense_nullspace(_sub(m, rows, cols)):
            out.append((cols[f], {cols[j]: v for j, v in vec.items()}))
    out.sort(key=lambda fv: fv[0])
    return [v for _, v in out]


def pivot_columns(m: SparseMatrix) -> list:
    out = []
    for rows, cols in blocks(m):
        if not rows:
            continue
        sub = _sub(m, rows, cols)
        r = [row for row in _integer_rows(sub.nrows, sub.columns) if any(row)]
        out.extend(cols[j] for j in bareiss_echelon(r, sub.ncols))
    return sorted(out)
