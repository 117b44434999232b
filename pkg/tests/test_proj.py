import pytest
from hypothesis import given, settings, strategies as st

from bruckbose.field import tower
from bruckbose.proj import (
    GeometryError,
    Subspace,
    conjugate,
    det,
    extend,
    mat_inv,
    mat_mul,
    meet,
    nullspace,
    normalize,
    rank,
    rational_points,
    rref,
    span,
    subspace_from_rows,
)

F3 = tower(3).base
F4 = tower(4).base


def test_normalize_first_nonzero_is_one():
    assert normalize(F3, (0, 2, 1)) == (0, 1, 2)
    with pytest.raises(GeometryError):
        normalize(F3, (0, 0, 0))


def test_point_counts():
    for q, F in ((3, F3), (4, F4)):
        for k in range(1, 4):
            U = Subspace(F, 7, [tuple(int(i == j) for i in range(7)) for j in range(k)])
            assert len(U.points()) == (q**k - 1) // (q - 1)


def test_rref_and_nullspace():
    rows = [(1, 2, 0, 1), (2, 1, 1, 0), (0, 0, 1, 1)]
    basis, piv = rref(F3, rows)
    assert len(basis) == rank(F3, rows)
    for v in nullspace(F3, rows, 4):
        for r in rows:
            assert sum(F3.mul[a][b] for a, b in zip(r, v)) % 3 == 0


def test_mat_inv():
    A = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert det(F3, A) != 0
    I = mat_mul(F3, A, mat_inv(F3, A))
    assert [list(r) for r in I] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_meet_of_skew_lines_is_empty():
    L = subspace_from_rows(F3, [(1, 0, 0, 0), (0, 1, 0, 0)])
    M = subspace_from_rows(F3, [(0, 0, 1, 0), (0, 0, 0, 1)])
    assert meet(L, M).is_empty()
    assert span(L, M).dim == 3


def test_mixed_spaces_rejected():
    U = Subspace(F3, 4, [(1, 0, 0, 0)])
    V = Subspace(F4, 4, [(1, 0, 0, 0)])
    with pytest.raises(GeometryError):
        meet(U, V)
    with pytest.raises(GeometryError):
        rational_points(Subspace(F3, 4))


def test_extend_and_conjugate():
    tw = tower(2)
    U = Subspace(tw.base, 7, [(0, 1, 0, 0, 0, 0, 1), (0, 0, 1, 1, 0, 0, 0)])
    V = extend(U, tw.ext)
    assert len(V.points()) == 9
    assert conjugate(V, tw.frobenius_table) == V
    assert V.points(order=2) == U.points()


def _vectors(q, n):
    return st.lists(st.integers(0, q - 1), min_size=n, max_size=n)


def _subspace(F, n, rows):
    return Subspace(F, n, [tuple(r) for r in rows if any(r)])


@settings(max_examples=80, deadline=None)
@given(st.lists(_vectors(3, 5), max_size=4), st.lists(_vectors(3, 5), max_size=4))
def test_dimension_formula(a, b):
    U, V = _subspace(F3, 5, a), _subspace(F3, 5, b)
    if U.is_empty() or V.is_empty():
        return
    assert span(U, V).rank + meet(U, V).rank == U.rank + V.rank


@settings(max_examples=60, deadline=None)
@given(st.lists(_vectors(3, 5), max_size=3), st.lists(_vectors(3, 5), max_size=3), st.lists(_vectors(3, 5), max_size=3))
def test_modular_law(a, b, c):
    # U ⊆ W  ⇒  U ∨ (V ∧ W) = (U ∨ V) ∧ W
    U, V, X = _subspace(F3, 5, a), _subspace(F3, 5, b), _subspace(F3, 5, c)
    if U.is_empty() or V.is_empty():
        return
    W = span(U, X) if not X.is_empty() else U
    lhs = span(U, meet(V, W)) if not meet(V, W).is_empty() else U
    assert lhs == meet(span(U, V), W)


@settings(max_examples=60, deadline=None)
@given(st.lists(_vectors(4, 4), min_size=1, max_size=3))
def test_contains_every_listed_point(rows):
    U = _subspace(F4, 4, rows)
    if U.is_empty():
        return
    pts = U.points()
    assert all(U.contains(p) for p in pts)
    assert len(pts) == (4**U.rank - 1) // 3
