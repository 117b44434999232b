import random

import pytest

from bruckbose.curves import (
    CurveError,
    check_nrc,
    conic_from_form,
    conic_through_5,
    enumerate_special_conics,
    enumerate_special_nrcs,
    form_eval,
    is_special_conic,
    nrc_from_subline,
    nrc_transversal_parameters,
    projective_line,
    random_special_nrc,
    singular_points,
    singular_points_by_scan,
    special_conic,
    special_conic_forms_brute_force,
    transversal_chords_disjoint,
)
from bruckbose.field import tower
from bruckbose.plane import enumerate_sublines, line_points, point_at_infinity, subline_through
from bruckbose.spread import build_spread
from bruckbose.surface import non_special_conic


@pytest.mark.parametrize("q", [2, 3, 4])
def test_special_conic_count_two_routes(q):
    sp = build_spread(q)
    for i in (0, 1, len(sp.elements) - 1):
        conics = enumerate_special_conics(sp, i)
        assert len(conics) == q * q + q + 1
        assert sorted(C.form for C in conics) == sorted(special_conic_forms_brute_force(sp, i))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_special_conics_nondegenerate(q):
    sp = build_spread(q)
    for C in enumerate_special_conics(sp, 1):
        assert singular_points(sp.ext, C.form) == []
        assert len(C.points) == q + 1
        assert is_special_conic(sp, C)


def test_two_points_determine_special_conic():
    sp = build_spread(3)
    pts = sp.elements[2].points()
    C = special_conic(sp, 2, pts[0], pts[1])
    for A, B in [(C.points[1], C.points[3]), (C.points[0], C.points[2])]:
        assert special_conic(sp, 2, A, B).form == C.form
    with pytest.raises(CurveError):
        special_conic(sp, 2, pts[0], pts[0])


def test_singular_points_methods_agree():
    F = tower(3).base
    forms = [(1, 1, 1, 0, 0, 0), (1, 2, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0), (1, 0, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0)]
    for f in forms:
        assert sorted(singular_points(F, f)) == sorted(singular_points_by_scan(F, f))
    F2 = tower(4).base
    for f in [(1, 1, 1, 0, 0, 0), (0, 0, 1, 1, 0, 0), (1, 0, 0, 0, 0, 1)]:
        assert sorted(singular_points(F2, f)) == sorted(singular_points_by_scan(F2, f))


def test_conic_through_five_rejects_collinear():
    F = tower(3).base
    pts = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0), (0, 0, 1)]
    with pytest.raises(CurveError):
        conic_through_5(F, pts)


def test_parameterisation_and_inverse():
    sp = build_spread(3)
    E = sp.ext
    C = enumerate_special_conics(sp, 4)[5]
    for t in projective_line(E)[::7]:
        X = C.evaluate(E, t)
        assert form_eval(E, C.form, C.internal(X)) == 0
        assert C.parameter_of(E, X) == t
    assert len(C.extended_points(E)) == 28
    for P in sp.transversal_points[4]:
        assert P in C.extended_points(E)
    off = next(X for X in sp.elements[4].points() if X not in C.points)
    with pytest.raises(CurveError):
        C.parameter_of(E, off)


@pytest.mark.parametrize("q", [2, 3])
def test_chords_disjoint(q):
    sp = build_spread(q)
    assert all(transversal_chords_disjoint(sp, i)["pass"] for i in range(len(sp.elements)))


def test_non_special_conic_misses_transversals():
    sp = build_spread(2)
    C = non_special_conic(sp, 0)
    assert not is_special_conic(sp, C)
    assert C.form not in special_conic_forms_brute_force(sp, 0)


def test_degenerate_form_rejected():
    sp = build_spread(2)
    with pytest.raises(CurveError):
        conic_from_form(sp, 0, (1, 0, 0, 0, 0, 0))


def test_special_nrc_count_q2(bb2):
    L = (0, 0, 1)
    curves = enumerate_special_nrcs(bb2, L)
    assert len(curves) == 56
    for N in curves:
        assert check_nrc(bb2, N) == []


def test_special_nrc_count_q3(bb3):
    curves = enumerate_special_nrcs(bb3, (0, 1, 5))
    assert len(curves) == 702
    assert len({N.points for N in curves}) == 702


def test_nrc_meets_transversals_in_three_parameters(bb2):
    E = bb2.ext
    L = (0, 1, 3)
    W = point_at_infinity(E, L)
    b = next(enumerate_sublines(E, 2, L, "disjoint", W))
    N = nrc_from_subline(bb2, b)
    ups = nrc_transversal_parameters(bb2, N)
    assert sorted(ups) == [0, 1, 2]
    P = bb2.spread.transversal_points[N.element]
    assert {N.evaluate(E, ups[k]) for k in range(3)} == set(P)
    assert all(X[0] for X in N.points)


def test_random_nrc_is_special(bb3):
    rng = random.Random(0)
    L = (0, 0, 1)
    for _ in range(5):
        assert check_nrc(bb3, random_special_nrc(bb3, L, rng)) == []


def test_subline_through_infinity_gives_no_special_curve(bb2):
    E = bb2.ext
    L = (0, 0, 1)
    W = point_at_infinity(E, L)
    aff = [X for X in line_points(E, L) if X[0]]
    b = subline_through(E, 2, W, aff[0], aff[1])
    assert b.meets_infinity()
