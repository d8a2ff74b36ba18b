from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from sftweyl.linalg import SparseMatrix, blocks, nullspace, pivot_columns, rank, solve


VALUES = [0] * 18 + [Fraction(n, d) for n in range(-3, 4) if n for d in (1, 2, 3)]


def matrices(max_rows=7, max_cols=7):
    @st.composite
    def build(draw):
        r = draw(st.integers(0, max_rows))
        c = draw(st.integers(1, max_cols))
        # zero-heavy entries keep block decomposition nontrivial
        row = st.lists(st.sampled_from(VALUES), min_size=c, max_size=c)
        return draw(st.lists(row, min_size=r, max_size=r)), c
    return build()


def _sym(rows, c):
    return sympy.Matrix(len(rows), c, [sympy.Rational(v.numerator, v.denominator)
                                       if isinstance(v, Fraction) else v
                                       for row in rows for v in row])


def _sparse(rows, c):
    if not rows:
        return SparseMatrix(0, [{} for _ in range(c)])
    return SparseMatrix.from_dense(rows)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_sympy(mc):
    rows, c = mc
    assert rank(_sparse(rows, c)) == _sym(rows, c).rank()


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_basis(mc):
    rows, c = mc
    m = _sparse(rows, c)
    ker = nullspace(m)
    assert len(ker) == c - _sym(rows, c).rank()
    for vec in ker:
        for i in range(m.nrows):
            assert sum(rows[i][j] * v for j, v in vec.items()) == 0
    if ker:
        dense = sympy.Matrix([[vec.get(j, 0) for j in range(c)] for vec in ker])
        assert dense.rank() == len(ker)


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_solve_agrees_with_feasibility(mc, data):
    rows, c = mc
    m = _sparse(rows, c)
    b = {i: data.draw(st.integers(-3, 3)) for i in range(m.nrows)}
    x = solve(m, b)
    A = _sym(rows, c)
    bb = sympy.Matrix(m.nrows, 1, [b[i] for i in range(m.nrows)])
    feasible = A.rank() == A.row_join(bb).rank() if m.nrows else True
    assert (x is not None) == feasible
    if x is not None:
        for i in range(m.nrows):
            assert sum(rows[i][j] * x[j] for j in range(c)) == b[i]


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_pivots_are_independent(mc):
    rows, c = mc
    m = _sparse(rows, c)
    piv = pivot_columns(m)
    assert len(piv) == rank(m)
    if piv:
        assert _sym(rows, c).extract(list(range(len(rows))), piv).rank() == len(piv)


def test_blocks_split_disjoint_support():
    m = SparseMatrix.from_dense([[1, 0, 0], [0, 2, 3], [0, 0, 0]])
    parts = sorted((sorted(r), sorted(c)) for r, c in blocks(m) if r)
    assert parts == [([0], [0]), ([1], [1, 2])]


def test_product_and_triplets():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.from_dense([[0, 1], [1, 0]])
    assert (a @ b).to_dense() == [[2, 1], [1, 0]]
    assert a.triplets() == [(0, 0, 1), (0, 1, 2), (1, 1, 1)]
    assert (SparseMatrix.from_dense([[0, 0]]) @ SparseMatrix.from_dense([[1], [1]])).is_zero()
