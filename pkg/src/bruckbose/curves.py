"""Special conics in spread elements and special normal rational curves.

A conic lives in a spread element π and is stored as a quadratic form in
the plane's internal coordinates (coefficients of x², y², z², xy, xz, yz),
never as a symmetric matrix, so even characteristic needs no special case.
A normal rational curve lives in an affine 3-space Σ about a spread element
α and carries the cubic parameterisation it was built from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .plane import Subline, enumerate_sublines, line_points, point_at_infinity, subline_through
from .proj import GeometryError, Subspace, det, normalize, nullspace, rank

MONOMIALS = ("xx", "yy", "zz", "xy", "xz", "yz")


class CurveError(GeometryError):
    pass


def combine(F, coeffs, rows):
    """sum(c_i * rows[i]) over F."""
    add, mul = F.add, F.mul
    out = [0] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c:
            m = mul[c]
            for k, r in enumerate(row):
                if r:
                    out[k] = add[out[k]][m[r]]
    return tuple(out)


def monomial_row(F, x):
    mul = F.mul
    a, b, c = x
    return (mul[a][a], mul[b][b], mul[c][c], mul[a][b], mul[a][c], mul[b][c])


def form_eval(F, form, x):
    add, mul = F.add, F.mul
    acc = 0
    for f, m in zip(form, monomial_row(F, x)):
        if f and m:
            acc = add[acc][mul[f][m]]
    return acc


def polar(F, form, x, y):
    """B(x, y) = Q(x+y) - Q(x) - Q(y)."""
    s = tuple(F.add[a][b] for a, b in zip(x, y))
    return F.sub[F.sub[form_eval(F, form, s)][form_eval(F, form, x)]][form_eval(F, form, y)]


def canonical_form(F, form):
    return normalize(F, form)


def singular_points(F, form):
    """Points of PG(2,F) where the form and all its partial derivatives vanish.

    The partials are x -> B(x, e_i), so the candidates form the radical of the
    polar form; only those with Q = 0 are singular.
    """
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    rows = [tuple(polar(F, form, ej, ei) for ej in e) for ei in e]
    kernel = nullspace(F, rows, 3)
    if not kernel:
        return []
    return [x for x in Subspace(F, 3, kernel).points() if form_eval(F, form, x) == 0]


def singular_points_by_scan(F, form):
    out = []
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for x in Subspace(F, 3, e).points():
        if form_eval(F, form, x) == 0 and all(polar(F, form, x, ei) == 0 for ei in e):
            out.append(x)
    return out


def conic_through_5(F, points):
    """Canonical quadratic form of the unique conic through five points of a plane.

    Points are internal 3-coordinate tuples over F.
    """
    pts = [normalize(F, p) for p in points]
    if len(set(pts)) != 5:
        raise CurveError("need five distinct points")
    for t in combinations(pts, 3):
        if rank(F, list(t)) < 3:
            raise CurveError("three of the points are collinear")
    ker = nullspace(F, [monomial_row(F, p) for p in pts], 6)
    if len(ker) != 1:
        raise CurveError(f"conic system has {len(ker)}-dimensional solution space")
    return canonical_form(F, ker[0])


# -- conics --------------------------------------------------------------------


@dataclass(frozen=True)
class Conic:
    """A conic of a spread element with a degree-2 parameterisation over GF(q).

    ``param`` is a 3x3 matrix: internal coordinate i of c(t0, t1) is
    param[i][0] t0² + param[i][1] t0 t1 + param[i][2] t1².  Parameter
    (0, 1) is the tangent line at the first rational point R.
    """

    element: int
    plane: Subspace = field(repr=False, compare=False)
    form: tuple
    points: tuple = field(compare=False)
    param: tuple = field(compare=False, repr=False)
    anchor: tuple = field(compare=False, repr=False)  # (r, U0, U1) internal

    def internal(self, X):
        return self.plane.coordinates(X)

    def ambient(self, F, x):
        return combine(F, x, self.plane.basis)

    def evaluate(self, F, t):
        t0, t1 = t
        mul = F.mul
        mons = (mul[t0][t0], mul[t0][t1], mul[t1][t1])
        x = tuple(_dot3(F, row, mons) for row in self.param)
        return normalize(F, self.ambient(F, x))

    def contains(self, F, X):
        return form_eval(F, self.form, self.internal(X)) == 0

    def parameter_of(self, F, X):
        """Homogeneous parameter t with c(t) = X, for X on the extended conic."""
        r, U0, U1 = self.anchor
        x = self.internal(X)
        if normalize(F, x) == normalize(F, r):
            return (0, 1)
        t = normalize(F, (det(F, [r, x, U1]), F.neg[det(F, [r, x, U0])]))
        if self.evaluate(F, t) != normalize(F, X):
            raise CurveError("point is not on the extended conic")
        return t

    def extended_points(self, E):
        return sorted({self.evaluate(E, t) for t in projective_line(E)})

    def to_json(self):
        return {
            "element": self.element,
            "form": list(self.form),
            "param": [list(r) for r in self.param],
            "points": [list(p) for p in self.points],
        }


def _dot3(F, a, b):
    add, mul = F.add, F.mul
    return add[add[mul[a[0]][b[0]]][mul[a[1]][b[1]]]][mul[a[2]][b[2]]]


def projective_line(F, order=None):
    """Homogeneous parameters of PG(1, F): (1, t) for each t, then (0, 1)."""
    k = order or F.order
    return [(1, t) for t in range(k)] + [(0, 1)]


def conic_from_form(spread, i, form):
    """Conic of spread element i with the given form (over GF(q)).

    The form must be non-degenerate; its parameterisation runs through the
    pencil of lines at the lexicographically first rational point.
    """
    F, E = spread.base, spread.ext
    plane = spread.elements[i]
    form = canonical_form(F, form)
    if singular_points(E, form):
        raise CurveError("degenerate conic")
    rational = plane.points()
    pts = tuple(X for X in rational if form_eval(F, form, plane.coordinates(X)) == 0)
    if len(pts) != spread.q + 1:
        raise CurveError(f"conic has {len(pts)} rational points")
    r = plane.coordinates(pts[0])
    internal = [plane.coordinates(X) for X in rational]
    on_tangent = [u for u in internal if polar(F, form, r, u) == 0 and u != r]
    off_tangent = [u for u in internal if polar(F, form, r, u) != 0]
    U1, U0 = on_tangent[0], off_tangent[0]
    beta = polar(F, form, r, U0)
    sub, mul = F.sub, F.mul
    qU0, qU1, bU = form_eval(F, form, U0), form_eval(F, form, U1), polar(F, form, U0, U1)
    param = tuple(
        (
            sub[mul[qU0][r[k]]][mul[beta][U0[k]]],
            sub[mul[bU][r[k]]][mul[beta][U1[k]]],
            mul[qU1][r[k]],
        )
        for k in range(3)
    )
    C = Conic(i, plane, form, pts, param, (r, U0, U1))
    if sorted(C.evaluate(F, t) for t in projective_line(F)) != list(pts):
        raise CurveError("parameterisation does not reproduce the conic")
    return C


def special_conic(spread, i, A, B):
    """The unique special conic of element i through two of its points."""
    F, E = spread.base, spread.ext
    plane = spread.elements[i]
    A, B = normalize(F, A), normalize(F, B)
    if A == B:
        raise CurveError("need two distinct points")
    if not (plane.contains(A) and plane.contains(B)):
        raise CurveError("points are not in the spread element")
    five = [plane.coordinates(A), plane.coordinates(B)] + [plane.coordinates(P) for P in spread.transversal_points[i]]
    form = conic_through_5(E, five)
    if any(c >= spread.q for c in form):
        raise CurveError("special conic is not defined over GF(q): spread model is inconsistent")
    return conic_from_form(spread, i, form)


def is_special_conic(spread, C):
    E = spread.ext
    return all(form_eval(E, C.form, C.plane.coordinates(P)) == 0 for P in spread.transversal_points[C.element])


def enumerate_special_conics(spread, i):
    """Special conics of element i, each once, via pairs of its points."""
    found = {}
    pts = spread.elements[i].points()
    covered = set()
    for A, B in combinations(pts, 2):
        if (A, B) in covered:
            continue
        C = special_conic(spread, i, A, B)
        covered.update(combinations(C.points, 2))
        found.setdefault(C.form, C)
    return list(found.values())


def special_conic_forms_brute_force(spread, i):
    """All forms over GF(q), up to scalar, vanishing at the transversal points of element i."""
    F, E, q = spread.base, spread.ext, spread.q
    plane = spread.elements[i]
    internal = [plane.coordinates(P) for P in spread.transversal_points[i]]
    out = []
    for form in product(range(q), repeat=6):
        if not any(form) or normalize(F, form) != form:
            continue
        if all(form_eval(E, form, x) == 0 for x in internal):
            out.append(form)
    return out


def transversal_chords_disjoint(spread, i):
    """No point of π lies on a chord PP^q, and no line of π passes through a transversal point."""
    F, E = spread.base, spread.ext
    plane = spread.elements[i]
    P = spread.transversal_points[i]
    violations = []
    for a, b in combinations(range(3), 2):
        chord = Subspace(E, 7, [P[a], P[b]])
        for X in plane.points():
            if chord.contains(X):
                violations.append({"chord": [a, b], "point": list(X)})
    pts = plane.points()
    for X, Y in combinations(pts, 2):
        line = Subspace(E, 7, [X, Y])
        for k in range(3):
            if line.contains(P[k]):
                violations.append({"line": [list(X), list(Y)], "transversal": k})
    return {"element": i, "points": len(pts), "violations": violations, "pass": not violations}


# -- normal rational curves ----------------------------------------------------


@dataclass(frozen=True)
class NormalRationalCurve:
    """Cubic curve n(t0, t1) in an affine 3-space about spread element ``element``.

    ``coeffs[k][j]`` is the GF(q) coefficient of t0^(3-j) t1^j in ambient
    coordinate k.
    """

    element: int
    space: Subspace = field(repr=False, compare=False)
    line: tuple
    coeffs: tuple = field(compare=False, repr=False)
    points: tuple
    subline: Subline = field(compare=False, repr=False)

    def evaluate(self, F, t):
        return _eval_cubic(F, self.coeffs, t)

    def internal_matrix(self):
        """4x4 coefficient matrix in Σ-internal coordinates."""
        return tuple(self.coeffs[c] for c in self.space.pivots)

    def norm_polynomial(self):
        """x0(t) with t0 = 1, constant term first."""
        return list(self.coeffs[0])

    def transversal_parameters(self, tw):
        """Parameters where the extended curve meets Σ∞*: the roots of x0(t)."""
        roots = tw.minimal_polynomial_roots(self.norm_polynomial())
        return [(1, r) for r in roots]

    def extended_points(self, E):
        return sorted({self.evaluate(E, t) for t in projective_line(E)})

    def key(self, E):
        return (self.points, tuple(self.extended_points(E)))

    def to_json(self):
        return {
            "element": self.element,
            "line": list(self.line),
            "coeffs": [list(r) for r in self.coeffs],
            "points": [list(p) for p in self.points],
        }


def _conj_linear(frob, lin):
    return [frob[c] for c in lin]


def nrc_from_subline(bb, b):
    """Bruck–Bose image of an order-q subline disjoint from ℓ∞, as a cubic curve.

    With s(t) = t0 X + t1 Y, scaling by the two conjugates of the first
    coordinate turns it into the norm N(s0(t)) over GF(q); the other two
    coordinates become GF(q^3)-cubics whose vec-components are GF(q)-cubics.
    """
    tw, E, q = bb.tower, bb.ext, bb.q
    if b.meets_infinity():
        raise CurveError("subline meets ℓ∞")
    frob = tw.frobenius_table
    X, Y = b.base, b.direction
    # coordinate k of s as a linear form [t0 coeff, t1 coeff]
    s = [[X[k], Y[k]] for k in range(3)]
    s0q = _conj_linear(frob, s[0])
    s0q2 = _conj_linear(frob, s0q)
    f = E.poly_mul(s0q, s0q2)
    cubics = [E.poly_mul(s[k], f) for k in range(3)]
    if any(c >= q for c in cubics[0]):
        raise CurveError("norm polynomial is not over GF(q)")
    rows = [tuple(cubics[0])]
    vecs = [[tw.vec(c) for c in cubics[k]] for k in (1, 2)]
    for k in (0, 1):
        for comp in range(3):
            rows.append(tuple(v[comp] for v in vecs[k]))
    coeffs = tuple(rows)
    W = point_at_infinity(E, b.line)
    alpha = bb.infinite_point(W)
    space = bb.line_to_3space(b.line)
    F = bb.base
    pts = tuple(sorted(_eval_cubic(F, coeffs, t) for t in projective_line(F)))
    curve = NormalRationalCurve(alpha, space, b.line, coeffs, pts, b)
    expected = sorted(bb.point_from_plane(P) for P in b.points)
    if list(pts) != expected:
        raise CurveError("curve points differ from the subline image")
    return curve


def _eval_cubic(F, coeffs, t):
    t0, t1 = t
    mul, add = F.mul, F.add
    mons = (mul[mul[t0][t0]][t0], mul[mul[t0][t0]][t1], mul[mul[t1][t1]][t0], mul[mul[t1][t1]][t1])
    out = []
    for row in coeffs:
        acc = 0
        for c, m in zip(row, mons):
            if c and m:
                acc = add[acc][mul[c][m]]
        out.append(acc)
    return normalize(F, out)


def nrc_transversal_parameters(bb, N):
    """Map k -> parameter of Q^{q^k} on the extended curve, checking all three appear."""
    E = bb.ext
    Q = bb.spread.transversal_points[N.element]
    out = {}
    for t in N.transversal_parameters(bb.tower):
        X = N.evaluate(E, t)
        if X in Q:
            out[Q.index(X)] = t
    return out


def is_special_nrc(bb, N):
    return len(nrc_transversal_parameters(bb, N)) == 3


def check_nrc(bb, N):
    """Genuineness checks on a curve; returns a list of failure strings."""
    F, E, q = bb.base, bb.ext, bb.q
    fails = []
    if rank(F, N.internal_matrix()) != 4:
        fails.append("coefficient matrix is singular")
    if len(set(N.points)) != q + 1:
        fails.append("rational points not distinct")
    if any(X[0] == 0 for X in N.points):
        fails.append("curve meets Σ∞")
    if not all(N.space.contains(X) for X in N.points):
        fails.append("curve leaves its 3-space")
    for four in combinations(N.points, 4):
        if rank(F, list(four)) < 4:
            fails.append("four rational points are coplanar")
            break
    ext = N.extended_points(E)
    if len(ext) != q**3 + 1:
        fails.append("extended parameterisation is not injective")
    if not is_special_nrc(bb, N):
        fails.append("extended curve misses a transversal point")
    return fails


def enumerate_special_nrcs(bb, L):
    """Special normal rational curves of the 3-space of line L, via its sublines."""
    E = bb.ext
    W = point_at_infinity(E, L)
    seen = set()
    out = []
    for b in enumerate_sublines(E, bb.q, L, "disjoint", W):
        N = nrc_from_subline(bb, b)
        k = N.key(E)
        if k in seen:
            raise CurveError("two sublines gave the same curve")
        seen.add(k)
        out.append(N)
    return out


def random_special_nrc(bb, L, rng):
    """A uniformly random special NRC of line L's 3-space (via a random disjoint subline)."""
    E = bb.ext
    affine = [X for X in line_points(E, L) if X[0] != 0]
    while True:
        X, Y, Z = rng.sample(affine, 3)
        b = subline_through(E, bb.q, X, Y, Z)
        if not b.meets_infinity():
            return nrc_from_subline(bb, b)
