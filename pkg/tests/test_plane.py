import random
from itertools import permutations

import pytest

from bruckbose.field import tower
from bruckbose.plane import (
    LINE_AT_INFINITY,
    SubplaneError,
    Subplane,
    all_points,
    check_subplane,
    classify_tangency,
    closed_form,
    count_sublines,
    enumerate_sublines,
    enumerate_tangent_subplanes,
    frame_subplane,
    incident,
    is_quadrangle,
    join,
    join_meet_closure,
    line_points,
    point_at_infinity,
    quadrangle_orderings_agree,
    subline_through,
    sublines_by_binomials,
    subplane_count_by_quadrangles,
)
from bruckbose.proj import GeometryError


def _affine(E):
    return [X for X in all_points(E) if X[0] != 0]


def _random_quadrangle(E, rng):
    pts = all_points(E)
    while True:
        quad = rng.sample(pts, 4)
        if is_quadrangle(E, quad):
            return quad


def test_point_and_line_counts():
    E = tower(2).ext
    pts = all_points(E)
    assert len(pts) == 73
    assert all(len(line_points(E, L)) == 9 for L in pts[:10])


def test_join_is_incident():
    E = tower(3).ext
    X, Y = (1, 0, 0), (1, 5, 7)
    L = join(E, X, Y)
    assert incident(E, X, L) and incident(E, Y, L)


@pytest.mark.parametrize("q", [2, 3])
def test_subline_counts(q):
    E = tower(q).ext
    L = (0, 0, 1)
    W = point_at_infinity(E, L)
    got = [count_sublines(E, q, L, c, W) for c in ("all", "through", "disjoint")]
    assert got == list(sublines_by_binomials(q))
    assert got == [closed_form(n, q) for n in ("sublines-per-line", "sublines-through-point", "sublines-disjoint")]


def test_subline_determined_by_three_points():
    E = tower(2).ext
    L = (0, 1, 3)
    pts = line_points(E, L)
    b = subline_through(E, 2, *pts[:3])
    for X, Y, Z in permutations(b.points):
        assert subline_through(E, 2, X, Y, Z).points == b.points
    with pytest.raises(GeometryError):
        subline_through(E, 2, (1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_sublines_unique():
    E = tower(2).ext
    keys = [b.key for b in enumerate_sublines(E, 2, (0, 0, 1))]
    assert len(keys) == len(set(keys)) == 84


@pytest.mark.parametrize("q", [2, 3, 4])
def test_frame_subplane_is_a_subplane(q):
    E = tower(q).ext
    rng = random.Random(q)
    for _ in range(5):
        quad = _random_quadrangle(E, rng)
        S = frame_subplane(E, q, *quad)
        check_subplane(E, q, S)
        assert set(quad) <= set(S.points)


@pytest.mark.parametrize("q", [2, 3])
def test_frame_matches_join_meet_closure_for_prime_q(q):
    E = tower(q).ext
    rng = random.Random(10 + q)
    for _ in range(3):
        quad = _random_quadrangle(E, rng)
        assert join_meet_closure(E, q, quad).key == frame_subplane(E, q, *quad).key


def test_closure_gives_prime_subplane_when_q_is_not_prime():
    # join/meet closure only reaches PG(2,2) inside PG(2,64)
    E = tower(4).ext
    quad = [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)]
    assert len(join_meet_closure(E, 4, quad).points) == 7
    assert len(frame_subplane(E, 4, *quad).points) == 21


def test_frame_order_independent():
    E = tower(3).ext
    quad = _random_quadrangle(E, random.Random(5))
    assert quadrangle_orderings_agree(E, 3, quad)


def test_check_subplane_rejects_junk():
    E = tower(2).ext
    bad = Subplane(tuple(all_points(E)[:7]), 2)
    with pytest.raises(SubplaneError):
        check_subplane(E, 2, bad)


def test_tangency_classes():
    E = tower(2).ext
    T = (0, 0, 1)
    S = next(enumerate_tangent_subplanes(E, 2, T))
    assert classify_tangency(E, 2, S, LINE_AT_INFINITY) == "tangent"
    assert classify_tangency(E, 2, S, join(E, T, S.affine_points()[0])) == "secant"
    outside = next(L for L in all_points(E) if not any(incident(E, X, L) for X in S.points))
    assert classify_tangency(E, 2, S, outside) == "external"
    with pytest.raises(SubplaneError):
        check_subplane(E, 2, Subplane(S.points[:-1], 2))


def test_tangent_subplanes_through_affine_point():
    # through T and a fixed affine point: closed form times (q^2+q)/q^6
    E = tower(2).ext
    T = (0, 0, 1)
    subs = list(enumerate_tangent_subplanes(E, 2, T, through=(1, 0, 0)))
    want = closed_form("tangent-subplanes-per-point", 2) * 6 // 64
    assert len(subs) == want == 588
    assert len({S.key for S in subs}) == want
    assert all(S.tangent_point == T and (1, 0, 0) in S.points for S in subs)


def test_tangent_requires_point_at_infinity():
    E = tower(2).ext
    with pytest.raises(GeometryError):
        next(enumerate_tangent_subplanes(E, 2, (1, 0, 0)))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_closed_form_identities(q):
    n = q**3
    assert subplane_count_by_quadrangles(q) == closed_form("total-subplanes", q)
    assert closed_form("total-subplanes", q) * closed_form("tangent-lines-per-subplane", q) == \
        (n * n + n + 1) * closed_form("tangent-subplanes-total", q)
    assert closed_form("tangent-subplanes-total", q) == (n + 1) * closed_form("tangent-subplanes-per-point", q)
    assert closed_form("triples", q) == closed_form("tangent-subplanes-per-point", q) * q * q


def test_closed_form_values():
    assert closed_form("tangent-subplanes-per-point", 2) == 6272
    assert closed_form("tangent-subplanes-per-point", 3) == 739206
    assert closed_form("total-subplanes", 2) == 98112
    assert closed_form("triples", 2) == 25088
    with pytest.raises(KeyError):
        closed_form("nope", 2)


def test_closure_size_over_many_quadrangles():
    E = tower(2).ext
    rng = random.Random(0)
    pts = all_points(E)
    n = 0
    while n < 10_000:
        quad = rng.sample(pts, 4)
        if not is_quadrangle(E, quad):
            continue
        S = frame_subplane(E, 2, *quad)
        assert len(S.points) == 7
        if n % 500 == 0:
            assert join_meet_closure(E, 2, quad).key == S.key
        n += 1


def test_closure_idempotent_inside_subplane():
    E = tower(3).ext
    T = (0, 0, 1)
    rng = random.Random(1)
    S = next(enumerate_tangent_subplanes(E, 3, T, through=(1, 0, 0)))
    for _ in range(20):
        quad = rng.sample(S.points, 4)
        if is_quadrangle(E, quad):
            assert frame_subplane(E, 3, *quad).key == S.key
