"""Order-q sublines and subplanes of PG(2, q^3).

Points and lines of the plane are canonical 3-tuples over GF(q^3) (lines in
dual coordinates).  A point lies on ℓ∞ iff its first coordinate is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb

from .proj import GeometryError, Subspace, normalize, nullspace, rank, solve

LINE_AT_INFINITY = (1, 0, 0)


class SubplaneError(GeometryError):
    """Raised when a point set fails the order-q subplane invariants."""


def all_points(E):
    return Subspace(E, 3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]).points()


all_lines = all_points  # the dual plane has the same canonical tuples


def join(E, X, Y):
    """Line through two distinct points (also: meet of two distinct lines)."""
    mul, sub = E.mul, E.sub
    x0, x1, x2 = X
    y0, y1, y2 = Y
    return normalize(E, (
        sub[mul[x1][y2]][mul[x2][y1]],
        sub[mul[x2][y0]][mul[x0][y2]],
        sub[mul[x0][y1]][mul[x1][y0]],
    ))


meet_lines = join


def incident(E, X, L):
    mul, add = E.mul, E.add
    return add[add[mul[X[0]][L[0]]][mul[X[1]][L[1]]]][mul[X[2]][L[2]]] == 0


def line_points(E, L):
    return Subspace(E, 3, nullspace(E, [L], 3)).points()


def is_affine(X):
    return X[0] != 0


def point_at_infinity(E, L):
    """ℓ∞ ∩ L for an affine line L."""
    if L == LINE_AT_INFINITY:
        raise GeometryError("ℓ∞ has no single point at infinity")
    return join(E, L, LINE_AT_INFINITY)


def _pg2_rational(q):
    return [p for p in product(range(q), repeat=3) if any(p) and p[next(i for i, a in enumerate(p) if a)] == 1]


# -- sublines -----------------------------------------------------------------


@dataclass(frozen=True)
class Subline:
    """An order-q subline {X + tY : t in GF(q)} ∪ {Y} of a line of PG(2,q^3)."""

    line: tuple
    base: tuple  # scaled X
    direction: tuple  # scaled Y (the point at t = ∞)
    points: tuple = field(compare=False)

    @property
    def key(self):
        return self.points

    def at(self, E, t):
        """Point at parameter t, with t a homogeneous pair (t0, t1)."""
        t0, t1 = t
        mul, add = E.mul, E.add
        return tuple(add[mul[t0][x]][mul[t1][y]] for x, y in zip(self.base, self.direction))

    def meets_infinity(self):
        return any(p[0] == 0 for p in self.points)


def subline_through(E, q, X, Y, Z):
    """The unique order-q subline through three distinct collinear points."""
    if len({X, Y, Z}) < 3:
        raise GeometryError("subline needs three distinct points")
    if rank(E, [X, Y, Z]) != 2:
        raise GeometryError("points are not collinear")
    # Z = a X + b Y
    sol = solve(E, [[X[i], Y[i]] for i in range(3)], list(Z))
    a, b = sol
    Xs = tuple(E.mul[a][c] for c in X)
    Ys = tuple(E.mul[b][c] for c in Y)
    return _make_subline(E, q, Xs, Ys)


def _make_subline(E, q, Xs, Ys):
    mul, add = E.mul, E.add
    pts = [normalize(E, tuple(add[x][mul[t][y]] for x, y in zip(Xs, Ys))) for t in range(q)]
    pts.append(normalize(E, Ys))
    pts = tuple(sorted(pts))
    if len(set(pts)) != q + 1:
        raise GeometryError("degenerate subline")
    return Subline(join(E, pts[0], pts[1]), Xs, Ys, pts)


def enumerate_sublines(E, q, L, constraint="all", W=None):
    """Yield each order-q subline of the line L once, in a deterministic order.

    ``constraint`` is ``"all"``, ``"through"`` (must contain W) or
    ``"disjoint"`` (must avoid W).
    """
    if constraint not in ("all", "through", "disjoint"):
        raise ValueError(f"unknown constraint {constraint!r}")
    pts = line_points(E, L)
    if constraint != "all":
        if W is None or W not in pts:
            raise GeometryError("W must be a point of the line")
    index = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    seen = set()
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if (i, j, k) in seen:
                    continue
                b = subline_through(E, q, pts[i], pts[j], pts[k])
                idx = sorted(index[p] for p in b.points)
                seen.update(combinations(idx, 3))
                inside = W in b.points if W is not None else None
                if constraint == "through" and not inside:
                    continue
                if constraint == "disjoint" and inside:
                    continue
                yield b


def count_sublines(E, q, L, constraint="all", W=None):
    return sum(1 for _ in enumerate_sublines(E, q, L, constraint, W))


# -- subplanes ----------------------------------------------------------------


@dataclass(frozen=True)
class Subplane:
    points: tuple  # sorted canonical points
    q: int

    @property
    def key(self):
        return self.points

    def infinite_points(self):
        return [p for p in self.points if p[0] == 0]

    def affine_points(self):
        return [p for p in self.points if p[0] != 0]

    @property
    def tangent_point(self):
        inf = self.infinite_points()
        return inf[0] if len(inf) == 1 else None

    def is_tangent(self):
        return len(self.infinite_points()) == 1

    def lines(self, E):
        """Secant lines with the points of the subplane on each."""
        out = {}
        for X, Y in combinations(self.points, 2):
            out.setdefault(join(E, X, Y), set()).update((X, Y))
        return {L: tuple(sorted(s)) for L, s in out.items()}


def frame_subplane(E, q, A, B, C, D, check=True):
    """Order-q subplane through the quadrangle A, B, C, D by frame transport.

    Writes D = aA + bB + cC and returns the image of PG(2,q) under the
    matrix with columns aA, bB, cC.
    """
    sol = solve(E, [[A[i], B[i], C[i]] for i in range(3)], list(D))
    if sol is None or 0 in sol:
        raise GeometryError("degenerate quadrangle")
    a, b, c = sol
    mul, add = E.mul, E.add
    cols = (
        tuple(mul[a][x] for x in A),
        tuple(mul[b][x] for x in B),
        tuple(mul[c][x] for x in C),
    )
    pts = set()
    for x0, x1, x2 in _rational_frame_points(q):
        v = [add[add[mul[x0][u]][mul[x1][v_]]][mul[x2][w]] for u, v_, w in zip(*cols)]
        pts.add(normalize(E, v))
    S = Subplane(tuple(sorted(pts)), q)
    if check and len(pts) != q * q + q + 1:
        raise SubplaneError("frame image has the wrong size")
    return S


_FRAME_CACHE = {}


def _rational_frame_points(q):
    pts = _FRAME_CACHE.get(q)
    if pts is None:
        pts = _FRAME_CACHE[q] = _pg2_rational(q)
    return pts


def is_quadrangle(E, pts):
    return len(set(pts)) == 4 and all(rank(E, list(t)) == 3 for t in combinations(pts, 3))


def quadrangle_closure(E, q, A, B, C, D):
    """The unique order-q subplane containing four points, no three collinear."""
    if not is_quadrangle(E, (A, B, C, D)):
        raise GeometryError("degenerate quadrangle: three points collinear")
    return frame_subplane(E, q, A, B, C, D)


def join_meet_closure(E, q, pts):
    """Closure of a point set under joins and meets (the prime subplane).

    For q prime this coincides with the order-q subplane of a quadrangle.
    The iteration aborts once more than q^2+q+1 points or lines appear.
    """
    limit = q * q + q + 1
    points = set(pts)
    lines = set()
    while True:
        new_lines = {join(E, X, Y) for X, Y in combinations(sorted(points), 2)}
        new_points = {meet_lines(E, L, M) for L, M in combinations(sorted(new_lines), 2)}
        if len(new_lines) > limit or len(points | new_points) > limit:
            raise SubplaneError("closure exceeded q^2+q+1 points or lines")
        if new_points <= points and new_lines == lines:
            return Subplane(tuple(sorted(points)), q)
        points |= new_points
        lines = new_lines


def check_subplane(E, q, S):
    """Raise SubplaneError unless S is a projective plane of order q in PG(2,q^3).

    Each pair of points determines one line; the plane condition is that
    there are q^2+q+1 points and every joining line carries exactly q+1 of
    them (so every other line meets S in at most one point).
    """
    n = q * q + q + 1
    if len(S.points) != n or len(set(S.points)) != n:
        raise SubplaneError(f"expected {n} points, got {len(set(S.points))}")
    pairs = {}
    for X, Y in combinations(S.points, 2):
        L = join(E, X, Y)
        pairs[L] = pairs.get(L, 0) + 1
    want = comb(q + 1, 2)
    bad = [L for L, c in pairs.items() if c != want]
    if bad:
        raise SubplaneError(f"line {bad[0]} meets the set in the wrong number of points")
    if len(pairs) != n:
        raise SubplaneError(f"expected {n} secant lines, got {len(pairs)}")
    return pairs


def classify_tangency(E, q, S, L):
    k = sum(1 for X in S.points if incident(E, X, L))
    if k == 0:
        return "external"
    if k == 1:
        return "tangent"
    if k == q + 1:
        return "secant"
    raise SubplaneError(f"line meets the point set in {k} points")


def enumerate_tangent_subplanes(E, q, T, through=None, anchors=None):
    """Yield each order-q subplane meeting ℓ∞ exactly in T, once.

    Quadrangles (T, A, B, C) with A < B < C over affine points are closed in
    turn.  Subplanes are attributed to their smallest affine point A; pairs
    (B, C) already inside a closed subplane through T and A are skipped.
    With ``through`` set, only subplanes containing that affine point are
    produced (and attribution is dropped).  ``anchors`` restricts the
    smallest affine point to the given indices (for splitting work).
    """
    if T[0] != 0:
        raise GeometryError("T must lie on ℓ∞")
    affine = [X for X in all_points(E) if X[0] != 0]
    index = {X: i for i, X in enumerate(affine)}
    if through is not None:
        anchors = [index[through]]
    elif anchors is None:
        anchors = range(len(affine))
    for ia in anchors:
        A = affine[ia]
        TA = join(E, T, A)
        covered = set()
        start = ia + 1 if through is None else 0
        others = [i for i in range(start, len(affine)) if i != ia and not incident(E, affine[i], TA)]
        for pos, ib in enumerate(others):
            B = affine[ib]
            TB = join(E, T, B)
            AB = join(E, A, B)
            for ic in others[pos + 1:]:
                if (ib, ic) in covered:
                    continue
                C = affine[ic]
                if incident(E, C, TB) or incident(E, C, AB):
                    continue
                S = frame_subplane(E, q, T, A, B, C)
                aff = sorted(index[X] for X in S.points if X[0] != 0)
                covered.update(combinations(aff, 2))
                if through is None and aff[0] < ia:
                    continue
                if len(S.points) - len(aff) != 1:
                    continue
                yield S


def enumerate_subplanes(E, q):
    """Yield every order-q subplane of PG(2,q^3) once (exhaustive; q = 2 scale).

    Each subplane is attributed to its smallest point A and generated from
    quadrangles (A, B, C, D) with A < B < C < D; triples (B, C, D) inside an
    already closed subplane through A are skipped.
    """
    pts = all_points(E)
    index = {X: i for i, X in enumerate(pts)}
    n = len(pts)
    for ia in range(n):
        A = pts[ia]
        covered = set()
        for ib in range(ia + 1, n):
            B = pts[ib]
            AB = join(E, A, B)
            rest = [i for i in range(ib + 1, n) if not incident(E, pts[i], AB)]
            for pos, ic in enumerate(rest):
                C = pts[ic]
                AC, BC = join(E, A, C), join(E, B, C)
                for id_ in rest[pos + 1:]:
                    if (ib, ic, id_) in covered:
                        continue
                    D = pts[id_]
                    if incident(E, D, AC) or incident(E, D, BC):
                        continue
                    S = frame_subplane(E, q, A, B, C, D)
                    idx = sorted(index[X] for X in S.points)
                    if idx[0] < ia:
                        covered.update(combinations([i for i in idx if i > ia], 3))
                        continue
                    covered.update(combinations(idx[1:], 3))
                    yield S


# -- closed forms --------------------------------------------------------------


def closed_form(name, q):
    """Exact counts for PG(2,q^3) substructures and the ruled-surface triples."""
    forms = {
        "total-subplanes": lambda: q**6 * (q**6 + q**3 + 1) * (q**2 - q + 1) * (q**2 + q + 1),
        "tangent-subplanes-total": lambda: q**7 * (q**2 - q + 1) * (q**2 + q + 1) ** 2 * (q - 1) * (q + 1),
        "tangent-subplanes-per-point": lambda: q**7 * (q**3 - 1) * (q**2 + q + 1),
        "tangent-lines-per-subplane": lambda: (q**2 + q + 1) * (q**3 - q),
        "sublines-per-line": lambda: q**2 * (q**2 + q + 1) * (q**2 - q + 1),
        "sublines-through-point": lambda: q**2 * (q**2 + q + 1),
        "sublines-disjoint": lambda: q**3 * (q**3 - 1),
        "special-conics": lambda: q**2 + q + 1,
        "special-nrcs": lambda: q**3 * (q**3 - 1),
        "triples": lambda: q**9 * (q**3 - 1) * (q**2 + q + 1),
    }
    if name not in forms:
        raise KeyError(f"unknown count {name!r}")
    return forms[name]()


def subplane_count_by_quadrangles(q):
    """Total order-q subplanes as ordered quadrangles of PG(2,q^3) over those of PG(2,q)."""
    n = q**3

    def quads(k):
        return (k * k + k + 1) * (k * k + k) * k * k * (k - 1) ** 2

    total, rem = divmod(quads(n), quads(q))
    assert rem == 0
    return total


def sublines_by_binomials(q):
    """Subline counts on one line via the binomial quotients."""
    n = q**3
    total = comb(n + 1, 3) // comb(q + 1, 3)
    through = comb(n, 2) // comb(q, 2)
    return total, through, total - through


def quadrangle_orderings_agree(E, q, quad):
    """Frame-transport closure is independent of the order of the four points."""
    keys = {frame_subplane(E, q, *perm).key for perm in permutations(quad)}
    return len(keys) == 1
