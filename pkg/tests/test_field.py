import pytest
from hypothesis import given, settings, strategies as st

from bruckbose.field import FieldError, FieldTower, FiniteField, smallest_primitive_polynomial, tower

QS = [2, 3, 4, 5, 7, 8, 9]


def test_gf8_modulus_is_y3_y_1():
    tw = tower(2)
    assert tw.ext_poly == [1, 1, 0, 1]
    # ω^3 = ω + 1
    E = tw.ext
    w = tw.omega
    assert E.pow(w, 3) == E.add[w][1]


def test_describe_records_polynomials():
    d = tower(4).describe()
    assert d["q"] == 4 and d["p"] == 2 and d["h"] == 2
    assert d["base_polynomial"] == [1, 1, 1]
    assert d["omega_vec"] == [0, 1, 0]


@pytest.mark.parametrize("q", QS)
def test_omega_is_primitive(q):
    E = tower(q).ext
    w = tower(q).omega
    seen = {E.pow(w, k) for k in range(E.order - 1)}
    assert len(seen) == E.order - 1


@pytest.mark.parametrize("q", QS)
def test_frobenius_fixes_exactly_base(q):
    tw = tower(q)
    fixed = [a for a in range(tw.ext.order) if tw.frobenius(a) == a]
    assert fixed == list(range(q))


@pytest.mark.parametrize("q", QS)
def test_frobenius_has_order_three(q):
    tw = tower(q)
    f = tw.frobenius_table
    assert all(f[f[f[a]]] == a for a in range(tw.ext.order))
    assert any(f[a] != a for a in range(tw.ext.order))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_norm_lands_in_base(q):
    tw = tower(q)
    assert all(tw.in_base(tw.norm(a)) for a in range(tw.ext.order))


@pytest.mark.parametrize("q", [6, 10, 1, 11])
def test_rejects_bad_q(q):
    with pytest.raises(FieldError):
        FieldTower(q)


def test_primitive_polynomial_order():
    F = FiniteField(2)
    assert smallest_primitive_polynomial(F, 3) == [1, 1, 0, 1]
    assert smallest_primitive_polynomial(F, 2) == [1, 1, 1]


def test_vec_unvec_roundtrip():
    tw = tower(3)
    for a in range(tw.ext.order):
        assert tw.unvec(tw.vec(a)) == a


def test_multiplication_matrix_matches_mul():
    tw = tower(3)
    E, F = tw.ext, tw.base
    a = 17
    M = tw.multiplication_matrix(a)
    for x in range(0, E.order, 5):
        v = tw.vec(x)
        Mv = tuple(F.add[F.add[F.mul[M[i][0]][v[0]]][F.mul[M[i][1]][v[1]]]][F.mul[M[i][2]][v[2]]] for i in range(3))
        assert tw.unvec(Mv) == E.mul[a][x]


def test_roots_with_multiplicity():
    tw = tower(2)
    E = tw.ext
    # (t - 3)^2 (t - 5)
    f = E.poly_mul(E.poly_mul([3, 1], [3, 1]), [5, 1])
    assert sorted(tw.minimal_polynomial_roots(f)) == [3, 3, 5]
    with pytest.raises(FieldError):
        tw.minimal_polynomial_roots([0, 0])


def _elems(q):
    n = q**3
    return st.integers(min_value=0, max_value=n - 1)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QS), st.data())
def test_field_axioms(q, data):
    E = tower(q).ext
    a, b, c = (data.draw(_elems(q)) for _ in range(3))
    add, mul = E.add, E.mul
    assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]
    assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
    assert add[a][E.neg[a]] == 0
    assert E.sub[add[a][b]][b] == a
    if a:
        assert mul[a][E.inv[a]] == 1


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QS), st.data())
def test_frobenius_is_homomorphism(q, data):
    tw = tower(q)
    E = tw.ext
    a, b = data.draw(_elems(q)), data.draw(_elems(q))
    f = tw.frobenius
    assert f(E.add[a][b]) == E.add[f(a)][f(b)]
    assert f(E.mul[a][b]) == E.mul[f(a)][f(b)]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.data())
def test_base_embeds_as_subfield(q, data):
    tw = tower(q)
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(0, q - 1))
    assert tw.ext.mul[a][b] == tw.base.mul[a][b]
    assert tw.ext.add[a][b] == tw.base.add[a][b]
