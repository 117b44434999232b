"""Projective linear algebra over table-driven finite fields.

Points are canonical coordinate tuples (first nonzero entry scaled to 1).
Subspaces are stored by their reduced row echelon basis, which makes
equality and hashing plain tuple comparison.
"""

from __future__ import annotations

from itertools import product


class GeometryError(ValueError):
    pass


def normalize(F, v):
    """Canonical representative of the projective point with coordinates v."""
    mul, inv = F.mul, F.inv
    for a in v:
        if a:
            if a == 1:
                return tuple(v)
            s = inv[a]
            return tuple(mul[s][x] for x in v)
    raise GeometryError("zero vector is not a projective point")


def scale(F, c, v):
    row = F.mul[c]
    return tuple(row[x] for x in v)


def axpy(F, a, x, y):
    """a*x + y, coordinatewise."""
    add, row = F.add, F.mul[a]
    return tuple(add[row[xi]][yi] for xi, yi in zip(x, y))


def vadd(F, x, y):
    add = F.add
    return tuple(add[a][b] for a, b in zip(x, y))


def dot(F, x, y):
    add, mul = F.add, F.mul
    acc = 0
    for a, b in zip(x, y):
        if a and b:
            acc = add[acc][mul[a][b]]
    return acc


def rref(F, rows):
    """Reduced row echelon form; returns (basis rows as tuples, pivot columns)."""
    mul, sub, inv = F.mul, F.sub, F.inv
    m = [list(r) for r in rows]
    if not m:
        return (), ()
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv[m[r][c]]
        if s != 1:
            srow = mul[s]
            m[r] = [srow[x] for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                frow = mul[m[i][c]]
                m[i] = [sub[x][frow[y]] for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def rank(F, rows):
    return len(rref(F, rows)[0])


def nullspace(F, rows, ncols):
    """Basis of {x : row . x = 0 for every row}, as tuples of length ncols."""
    basis, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    neg = F.neg
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(basis, pivots):
            v[pc] = neg[row[f]]
        out.append(tuple(v))
    return out


def solve(F, A, b):
    """One solution x of A x = b, or None if inconsistent."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    basis, pivots = rref(F, aug)
    if n in pivots:
        return None
    x = [0] * n
    for row, pc in zip(basis, pivots):
        x[pc] = row[n]
    return tuple(x)


def mat_mul(F, A, B):
    add, mul = F.add, F.mul
    cols = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc = add[acc][mul[a][b]]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_vec(F, A, x):
    return tuple(dot(F, row, x) for row in A)


def mat_inv(F, A):
    n = len(A)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    basis, pivots = rref(F, aug)
    if tuple(pivots[:n]) != tuple(range(n)) or len(basis) < n:
        raise GeometryError("matrix is singular")
    return tuple(tuple(row[n:]) for row in basis)


def det(F, A):
    """Determinant by elimination."""
    mul, sub, inv = F.mul, F.sub, F.inv
    m = [list(r) for r in A]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = F.neg[d]
        d = mul[d][m[c][c]]
        s = inv[m[c][c]]
        for i in range(c + 1, n):
            if m[i][c]:
                f = mul[m[i][c]][s]
                frow = mul[f]
                m[i] = [sub[x][frow[y]] for x, y in zip(m[i], m[c])]
    return d


class Subspace:
    """A projective subspace, held as a reduced row echelon basis.

    ``n`` is the vector length (projective dimension of the ambient space
    plus one).  The empty subspace has no basis rows and dimension -1.
    """

    __slots__ = ("field", "n", "basis", "pivots", "_ann")

    def __init__(self, field, n, rows=()):
        self.field = field
        self.n = n
        self.basis, self.pivots = rref(field, rows) if rows else ((), ())
        self._ann = None

    @classmethod
    def _from_rref(cls, field, n, basis, pivots):
        obj = cls.__new__(cls)
        obj.field, obj.n, obj.basis, obj.pivots, obj._ann = field, n, basis, pivots, None
        return obj

    @property
    def dim(self):
        return len(self.basis) - 1

    @property
    def rank(self):
        return len(self.basis)

    def is_empty(self):
        return not self.basis

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field is other.field and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        return f"Subspace({self.field!r}, dim={self.dim}, basis={list(self.basis)})"

    def annihilator(self):
        """Rows a with a.x = 0 exactly on this subspace."""
        if self._ann is None:
            if self.basis:
                self._ann = tuple(nullspace(self.field, self.basis, self.n))
            else:
                self._ann = tuple(tuple(int(i == j) for j in range(self.n)) for i in range(self.n))
        return self._ann

    def contains(self, x):
        if isinstance(x, Subspace):
            return all(self.contains(row) for row in x.basis)
        F = self.field
        return all(dot(F, a, x) == 0 for a in self.annihilator())

    __contains__ = contains

    def coordinates(self, x):
        """Coefficients of x (assumed in the subspace) in the echelon basis."""
        return tuple(x[c] for c in self.pivots)

    def from_coordinates(self, coeffs):
        F = self.field
        out = (0,) * self.n
        for c, row in zip(coeffs, self.basis):
            if c:
                out = axpy(F, c, row, out)
        return out

    def points(self, order=None):
        """Canonical points of the subspace, sorted.

        With ``order`` set to the size of a subfield (codes ``< order``), only
        combinations over that subfield are taken; for a subspace rational
        over the subfield these are exactly its rational points.
        """
        k = order or self.field.order
        rows = self.basis
        r = len(rows)
        out = []
        for lead in range(r):
            # first nonzero coefficient at position `lead`, equal to 1
            for tail in product(range(k), repeat=r - lead - 1):
                coeffs = (0,) * lead + (1,) + tail
                out.append(self.from_coordinates(coeffs))
        out.sort()
        return out

    def to_json(self):
        return {"n": self.n, "basis": [list(r) for r in self.basis]}


def subspace_from_rows(F, rows, n=None):
    rows = list(rows)
    if n is None:
        n = len(rows[0])
    return Subspace(F, n, rows)


def point_space(F, x):
    return Subspace(F, len(x), [x])


def span(*objects):
    """Smallest subspace containing all given points / subspaces.

    Points must be passed as ``(field, tuple)`` pairs or via Subspace objects;
    use :func:`span_points` for the common case of bare coordinate tuples.
    """
    field, n, rows = None, None, []
    for obj in objects:
        if not isinstance(obj, Subspace):
            raise GeometryError("span() takes Subspace objects; use span_points for tuples")
        if field is None:
            field, n = obj.field, obj.n
        elif obj.field is not field or obj.n != n:
            raise GeometryError("mixed ambient spaces")
        rows.extend(obj.basis)
    if field is None:
        raise GeometryError("span of nothing")
    return Subspace(field, n, rows)


def span_points(F, points, *subspaces):
    pts = list(points)
    n = len(pts[0]) if pts else subspaces[0].n
    rows = [tuple(p) for p in pts]
    for U in subspaces:
        if U.field is not F or U.n != n:
            raise GeometryError("mixed ambient spaces")
        rows.extend(U.basis)
    for p in pts:
        if len(p) != n:
            raise GeometryError("mixed ambient spaces")
    return Subspace(F, n, rows)


def meet(U, V):
    if U.field is not V.field or U.n != V.n:
        raise GeometryError("mixed ambient spaces")
    if U.is_empty() or V.is_empty():
        return Subspace(U.field, U.n)
    rows = list(U.annihilator()) + list(V.annihilator())
    if not rows:
        return U
    return Subspace(U.field, U.n, nullspace(U.field, rows, U.n))


def rational_points(U):
    """All points of U over its own field, in lexicographic order."""
    if U.is_empty():
        raise GeometryError("empty subspace has no points")
    return U.points()


def extend(U, E):
    """The same subspace viewed over the extension field E."""
    return Subspace._from_rref(E, U.n, U.basis, U.pivots)


def conjugate_point(frob, x):
    return tuple(frob[a] for a in x)


def conjugate(V, frob):
    """Entrywise Frobenius image of a subspace (``frob`` is a lookup table)."""
    rows = [tuple(frob[a] for a in r) for r in V.basis]
    # Frobenius keeps 0 and 1, so echelon shape is preserved
    return Subspace._from_rref(V.field, V.n, tuple(rows), V.pivots)


def collinear(F, X, Y, Z):
    return rank(F, [X, Y, Z]) <= 2


def is_rational(x, q):
    return all(a < q for a in x)


def hyperplane(F, n, coeffs):
    """The hyperplane sum(coeffs[i] x_i) = 0."""
    return Subspace(F, n, nullspace(F, [coeffs], n))
