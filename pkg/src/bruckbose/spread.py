"""The regular 2-spread of Σ∞ ≅ PG(5,q) and the Bruck–Bose model of PG(2,q^3).

Coordinates of PG(6,q) are (x0, x1..x6) with Σ∞ = {x0 = 0}.  A point
(x0, u, v) with u, v in GF(q)^3 corresponds to (x0, unvec(u), unvec(v)) in
PG(2,q^3); the spread elements are the GF(q^3)-scalar orbits in Σ∞.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .field import tower as _tower
from .plane import (
    LINE_AT_INFINITY,
    all_lines,
    all_points,
    incident,
    join,
    line_points,
    point_at_infinity,
)
from .proj import (
    GeometryError,
    Subspace,
    conjugate,
    conjugate_point,
    extend,
    meet,
    normalize,
    nullspace,
    span_points,
)

N = 7  # vector length of PG(6, q)


class SpreadModel:
    """Spread elements of Σ∞ with the transversal lines and points.

    ``elements[i]`` is the spread plane belonging to ``infinity_points[i]``
    (points of ℓ∞ in lexicographic order, so element 0 is (0,0,1)).
    ``transversal_points[i]`` is (P, P^q, P^{q^2}) with P on g.
    """

    def __init__(self, tw):
        self.tower = tw
        self.q = tw.q
        F, E = tw.base, tw.ext
        self.base, self.ext = F, E
        self.sigma_inf = Subspace(F, N, [[int(j == i) for j in range(N)] for i in range(1, N)])
        self.infinity_points = [X for X in all_points(E) if X[0] == 0]
        self.infinity_index = {W: i for i, W in enumerate(self.infinity_points)}
        self.elements = [self._element(W) for W in self.infinity_points]
        self.element_index = {S: i for i, S in enumerate(self.elements)}
        self._point_element = {}
        for i, S in enumerate(self.elements):
            for X in S.points():
                self._point_element[X] = i
        self.transversals = self._transversals()
        frob = tw.frobenius_table
        self.transversal_points = []
        for S in self.elements:
            Sx = extend(S, E)
            P = meet(Sx, self.transversals[0])
            if P.dim != 0:
                raise GeometryError("spread element does not meet g in one point")
            P = P.basis[0]
            Pq = conjugate_point(frob, P)
            self.transversal_points.append((P, Pq, conjugate_point(frob, Pq)))

    def _element(self, W):
        tw, E = self.tower, self.ext
        _, y, z = W
        rows = []
        for j in range(3):
            a = E.pow(tw.omega, j)
            rows.append((0,) + tw.vec(E.mul[a][y]) + tw.vec(E.mul[a][z]))
        return Subspace(self.base, N, rows)

    def _transversals(self):
        """g = ω-eigenline of multiplication by ω on Σ∞*, and its conjugates."""
        tw, E = self.tower, self.ext
        M = tw.multiplication_matrix(tw.omega)
        w = tw.omega
        rows = []
        # x0 = 0 and (M - w I) on each GF(q)^3 block
        rows.append((1,) + (0,) * 6)
        for block in (0, 1):
            for i in range(3):
                r = [0] * N
                for j in range(3):
                    r[1 + 3 * block + j] = E.sub[M[i][j]][w if i == j else 0]
                rows.append(tuple(r))
        g = Subspace(E, N, nullspace(E, rows, N))
        frob = tw.frobenius_table
        gq = conjugate(g, frob)
        return [g, gq, conjugate(gq, frob)]

    def element_through(self, X):
        """Index of the spread element containing the Σ∞ point X."""
        X = normalize(self.base, X)
        if X[0] != 0:
            raise GeometryError("point is not in Σ∞")
        return self._point_element[X]

    def transversal_index(self, i, X):
        """Which of P, P^q, P^{q^2} of element i equals X (or None)."""
        for k, P in enumerate(self.transversal_points[i]):
            if P == X:
                return k
        return None

    def to_json(self):
        return {
            "tower": self.tower.describe(),
            "elements": [[list(r) for r in S.basis] for S in self.elements],
            "infinity_points": [list(W) for W in self.infinity_points],
            "transversals": [[list(r) for r in g.basis] for g in self.transversals],
            "transversal_points": [[list(P) for P in tp] for tp in self.transversal_points],
        }

    @classmethod
    def from_json(cls, data):
        model = build_spread(data["tower"]["q"])
        if model.to_json() != data:
            raise GeometryError("spread JSON does not match the canonical construction")
        return model


@lru_cache(maxsize=None)
def build_spread(q):
    return SpreadModel(_tower(q))


def verify_spread(model):
    """Partition, skewness and transversal-span checks; returns a result dict."""
    F, E, q = model.base, model.ext, model.q
    frob = model.tower.frobenius_table
    failures = []
    n_elements = len(model.elements)
    covered = {}
    for i, S in enumerate(model.elements):
        if S.dim != 2 or not model.sigma_inf.contains(S):
            failures.append({"element": i, "reason": "not a plane of Σ∞"})
        for X in S.points():
            if X in covered:
                failures.append({"point": list(X), "elements": [covered[X], i]})
            covered[X] = i
    sigma_points = model.sigma_inf.points()
    if len(covered) != len(sigma_points):
        failures.append({"reason": "spread does not cover Σ∞", "covered": len(covered)})
    g = model.transversals
    for a, b in combinations(range(3), 2):
        if not meet(g[a], g[b]).is_empty():
            failures.append({"reason": "transversals meet", "pair": [a, b]})
    if conjugate(g[2], frob) != g[0]:
        failures.append({"reason": "Frobenius does not cycle the transversals"})
    for k, line in enumerate(g):
        if line.dim != 1:
            failures.append({"reason": "transversal is not a line", "index": k})
        for X in sigma_points:
            if line.contains(X):
                failures.append({"reason": "transversal meets Σ∞", "index": k, "point": list(X)})
                break
    for i, (P, Pq, Pq2) in enumerate(model.transversal_points):
        if not (g[1].contains(Pq) and g[2].contains(Pq2)):
            failures.append({"element": i, "reason": "conjugate points off the conjugate transversals"})
        if span_points(E, [P, Pq, Pq2]) != extend(model.elements[i], E):
            failures.append({"element": i, "reason": "transversal points do not span π*"})
    return {
        "q": q,
        "elements": n_elements,
        "points_covered": len(covered),
        "sigma_points": len(sigma_points),
        "failures": failures,
        "pass": not failures and n_elements == q**3 + 1,
    }


class BruckBose:
    """Coordinate bijections between PG(2,q^3) and the model in PG(6,q)."""

    def __init__(self, spread):
        self.spread = spread
        self.tower = spread.tower
        self.q = spread.q
        self.base, self.ext = spread.base, spread.ext

    def point_to_plane(self, X):
        tw, F = self.tower, self.base
        X = normalize(F, X)
        if X[0] == 0:
            raise GeometryError("points of Σ∞ correspond to spread elements, not points")
        return (1, tw.unvec(X[1:4]), tw.unvec(X[4:7]))

    def point_from_plane(self, Y):
        tw, E = self.tower, self.ext
        Y = normalize(E, Y)
        if Y[0] == 0:
            raise GeometryError("point lies on ℓ∞")
        return (1,) + tw.vec(Y[1]) + tw.vec(Y[2])

    def infinite_point(self, W):
        """Index of the spread element corresponding to the ℓ∞ point W."""
        W = normalize(self.ext, W)
        if W[0] != 0:
            raise GeometryError("point is not on ℓ∞")
        return self.spread.infinity_index[W]

    def infinite_element(self, W):
        return self.spread.elements[self.infinite_point(W)]

    def infinite_point_inverse(self, element):
        """ℓ∞ point of a spread element (given as index or Subspace)."""
        if isinstance(element, Subspace):
            element = self.spread.element_index[element]
        return self.spread.infinity_points[element]

    def element_to_infinite_point(self, S):
        """Recover W from any Σ∞ plane that is a spread element, via one of its points."""
        tw = self.tower
        X = S.basis[0]
        return normalize(self.ext, (0, tw.unvec(X[1:4]), tw.unvec(X[4:7])))

    def line_to_3space(self, L):
        E = self.ext
        L = normalize(E, L)
        if L == LINE_AT_INFINITY:
            raise GeometryError("ℓ∞ has no 3-space image")
        W = point_at_infinity(E, L)
        a, b, c = L
        if c:
            A = (1, 0, E.neg[E.div(a, c)])
        else:
            A = (1, E.neg[E.div(a, b)], 0)
        return span_points(self.base, [self.point_from_plane(A)], self.infinite_element(W))

    def line_from_3space(self, S):
        """Line of PG(2,q^3) for an affine 3-space about a spread element."""
        pts = [X for X in S.points() if X[0] != 0][:2]
        if len(pts) < 2:
            raise GeometryError("3-space has fewer than two affine points")
        return join(self.ext, *(self.point_to_plane(X) for X in pts))

    def spaces_about(self, i):
        """Lines through ℓ∞-point i other than ℓ∞, with their 3-space images, sorted by line."""
        W = self.spread.infinity_points[i]
        lines = [L for L in all_lines(self.ext) if L != LINE_AT_INFINITY and incident(self.ext, W, L)]
        return [(L, self.line_to_3space(L)) for L in lines]


def verify_plane_axioms(bb):
    """Check the completed model is a projective plane of order q^3 isomorphic to PG(2,q^3).

    Points of the model are the affine points of PG(6,q) and the spread
    elements; lines are the 3-spaces about spread elements plus ℓ∞.  The
    coordinate maps are checked to carry every line of PG(2,q^3) onto the
    corresponding model line, which makes them an incidence isomorphism.
    """
    spread, F, E, q = bb.spread, bb.base, bb.ext, bb.q
    n = q**3
    failures = []
    affine6 = [X for X in Subspace(F, N, [[int(i == j) for j in range(N)] for i in range(N)]).points() if X[0] != 0]
    plane_pts = [X for X in all_points(E) if X[0] != 0]
    # point bijection
    images = {bb.point_to_plane(X) for X in affine6}
    if images != set(plane_pts):
        failures.append({"reason": "point map is not a bijection"})
    for X in affine6:
        if bb.point_from_plane(bb.point_to_plane(X)) != X:
            failures.append({"reason": "point round trip", "point": list(X)})
            break
    # model points: affine points of PG(6,q) then spread elements
    model_index = {X: i for i, X in enumerate(affine6)}
    n_aff = len(affine6)
    model_lines = []
    seen_spaces = set()
    for L in all_lines(E):
        if L == LINE_AT_INFINITY:
            model_lines.append(frozenset(range(n_aff, n_aff + len(spread.elements))))
            continue
        S = bb.line_to_3space(L)
        if S.dim != 3:
            failures.append({"reason": "line image is not a 3-space", "line": list(L)})
            continue
        seen_spaces.add(S)
        pts = S.points()
        aff = {X for X in pts if X[0] != 0}
        inf = [X for X in pts if X[0] == 0]
        elems = {spread.element_through(X) for X in inf}
        W = point_at_infinity(E, L)
        if elems != {bb.infinite_point(W)} or len(inf) != q * q + q + 1:
            failures.append({"reason": "3-space does not meet Σ∞ in the spread element", "line": list(L)})
        on_line = {bb.point_from_plane(Y) for Y in line_points(E, L) if Y[0] != 0}
        if on_line != aff:
            failures.append({"reason": "incidence not preserved", "line": list(L)})
        model_lines.append(frozenset([model_index[X] for X in aff] + [n_aff + e for e in elems]))
    n_points = n_aff + len(spread.elements)
    expected = n * n + n + 1
    if n_points != expected or len(model_lines) != expected:
        failures.append({"reason": "wrong number of points or lines", "points": n_points, "lines": len(model_lines)})
    if len(seen_spaces) != n * n + n:
        failures.append({"reason": "line map is not injective"})
    for i, ml in enumerate(model_lines):
        if len(ml) != n + 1:
            failures.append({"reason": "line size", "line": i, "size": len(ml)})
    # any two lines meet in exactly one point; with the counts above this
    # forces any two points to lie on exactly one line
    masks = [sum(1 << k for k in ml) for ml in model_lines]
    pair_failures = 0
    for i in range(len(masks)):
        mi = masks[i]
        for j in range(i + 1, len(masks)):
            if (mi & masks[j]).bit_count() != 1:
                pair_failures += 1
                if pair_failures == 1:
                    failures.append({"reason": "two lines do not meet in one point", "lines": [i, j]})
    pairs_covered = sum(len(ml) * (len(ml) - 1) // 2 for ml in model_lines)
    if pairs_covered != n_points * (n_points - 1) // 2:
        failures.append({"reason": "point pairs not covered exactly once"})
    return {
        "q": q,
        "points": n_points,
        "lines": len(model_lines),
        "points_per_line": n + 1,
        "affine_3spaces": len(seen_spaces),
        "failures": failures,
        "pass": not failures,
    }


@lru_cache(maxsize=None)
def bruck_bose(q):
    return BruckBose(build_spread(q))
