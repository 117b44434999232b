"""Ruled surfaces joining a special conic to a special normal rational curve.

The generator through conic parameter t joins c(t) to n(φ(t)), where φ is
the projectivity of PG(1,q^3) sending the parameters of P, P^q, P^{q^2} on
the conic to those of Q, Q^q, Q^{q^2} on the curve.  Surfaces are compared
by their affine point sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .curves import (
    CurveError,
    conic_from_form,
    enumerate_special_conics,
    enumerate_special_nrcs,
    is_special_conic,
    nrc_from_subline,
    nrc_transversal_parameters,
    projective_line,
    random_special_nrc,
    special_conic,
)
from .plane import Subplane, SubplaneError, check_subplane, subline_through
from .proj import GeometryError, Subspace, conjugate_point, mat_inv, mat_mul, meet, normalize


class TheoremViolation(GeometryError):
    """A structural check failed; ``payload`` is the counterexample."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


# -- projectivities of PG(1, q^3) ------------------------------------------------


@dataclass(frozen=True)
class ParamProjectivity:
    matrix: tuple  # 2x2, canonical (first nonzero entry 1)
    over_base: bool

    def __call__(self, E, t):
        (a, b), (c, d) = self.matrix
        mul, add = E.mul, E.add
        t0, t1 = t
        return normalize(E, (add[mul[a][t0]][mul[b][t1]], add[mul[c][t0]][mul[d][t1]]))


def _frame_matrix(E, a, b, c):
    """Matrix sending (1,0), (0,1), (1,1) to a, b, c (as projective points)."""
    # c = x a + y b
    mul, sub, add = E.mul, E.sub, E.add
    detab = sub[mul[a[0]][b[1]]][mul[a[1]][b[0]]]
    if detab == 0:
        raise GeometryError("repeated parameters")
    inv = E.inv[detab]
    x = mul[inv][sub[mul[c[0]][b[1]]][mul[c[1]][b[0]]]]
    y = mul[inv][sub[mul[a[0]][c[1]]][mul[a[1]][c[0]]]]
    if x == 0 or y == 0:
        raise GeometryError("repeated parameters")
    return ((mul[x][a[0]], mul[y][b[0]]), (mul[x][a[1]], mul[y][b[1]]))


def projectivity_from_3_pairs(E, q, src, dst):
    """The unique projectivity of PG(1,E) with src[i] -> dst[i]."""
    src = [normalize(E, t) for t in src]
    dst = [normalize(E, t) for t in dst]
    if len(set(src)) != 3 or len(set(dst)) != 3:
        raise GeometryError("parameters must be pairwise distinct")
    Ms = _frame_matrix(E, *src)
    Md = _frame_matrix(E, *dst)
    M = mat_mul(E, Md, mat_inv(E, Ms))
    flat = normalize(E, M[0] + M[1])
    matrix = (flat[:2], flat[2:])
    return ParamProjectivity(matrix, all(a < q for a in flat))


def compose(E, q, f, g):
    """f after g."""
    M = mat_mul(E, f.matrix, g.matrix)
    flat = normalize(E, M[0] + M[1])
    return ParamProjectivity((flat[:2], flat[2:]), all(a < q for a in flat))


def inverse(E, q, f):
    M = mat_inv(E, f.matrix)
    flat = normalize(E, M[0] + M[1])
    return ParamProjectivity((flat[:2], flat[2:]), all(a < q for a in flat))


# -- ruled surfaces ------------------------------------------------------------------


@dataclass(frozen=True)
class RuledSurface:
    conic: object
    nrc: object
    phi: ParamProjectivity
    generators: tuple = field(repr=False)  # ((t, c(t), n(φ t)), ...)
    lines: tuple = field(repr=False)  # generator Subspaces over GF(q)
    affine_points: tuple = field(repr=False)
    pi: int = 0
    tangent_point: tuple = ()

    @property
    def key(self):
        return self.affine_points

    def to_json(self):
        return {
            "pi_index": self.pi,
            "tangent_point": list(self.tangent_point),
            "conic": self.conic.to_json(),
            "nrc": self.nrc.to_json(),
            "phi_matrix": [list(r) for r in self.phi.matrix],
            "generators": [[list(X) for X in L.points()] for L in self.lines],
            "affine_points": [list(X) for X in self.affine_points],
        }


DEFAULT_PINNING = (0, 1, 2)


def build_ruled_surface(bb, C, N, pinning=DEFAULT_PINNING):
    """Ruled surface with directrices C, N and the transversal-pinned projectivity.

    ``pinning[k]`` names which Q^{q^j} receives P^{q^k}; anything other
    than a cyclic shift of (0, 1, 2) breaks Frobenius equivariance and is
    only useful as a negative control.
    """
    spread, E, F, q = bb.spread, bb.ext, bb.base, bb.q
    if C.element == N.element:
        raise TheoremViolation("conic plane and curve spread element coincide", {"pi": C.element, "alpha": N.element})
    P = spread.transversal_points[C.element]
    tau = []
    for k in range(3):
        try:
            tau.append(C.parameter_of(E, P[k]))
        except CurveError:
            raise TheoremViolation(
                "conic is not special: transversal point missing from its extension",
                {"pi": C.element, "form": list(C.form), "missing": list(P[k]), "k": k},
            ) from None
    ups = nrc_transversal_parameters(bb, N)
    if len(ups) != 3:
        raise TheoremViolation("curve is not special", {"alpha": N.element, "found": sorted(ups)})
    phi = projectivity_from_3_pairs(E, q, tau, [ups[pinning[k]] for k in range(3)])
    if not phi.over_base:
        raise TheoremViolation(
            "pinned projectivity is not defined over GF(q)",
            {"phi_matrix": [list(r) for r in phi.matrix], "pinning": list(pinning)},
        )
    gens, lines, affine = [], [], set()
    for t in projective_line(F):
        X = C.evaluate(F, t)
        Y = N.evaluate(F, phi(F, t))
        line = Subspace(F, 7, [X, Y])
        gens.append((t, X, Y))
        lines.append(line)
        affine.update(Z for Z in line.points() if Z[0] != 0)
    T = bb.infinite_point_inverse(C.element)
    return RuledSurface(C, N, phi, tuple(gens), tuple(lines), tuple(sorted(affine)), C.element, T)


def check_surface(bb, B):
    """Generator and transversal checks; returns a list of failure dicts."""
    spread, E, F, q = bb.spread, bb.ext, bb.base, bb.q
    fails = []
    if len(B.lines) != q + 1:
        fails.append({"reason": "wrong number of generators", "count": len(B.lines)})
    for (i, L), (j, M) in combinations(enumerate(B.lines), 2):
        if not meet(L, M).is_empty():
            fails.append({"reason": "generators meet", "generators": [i, j]})
    conic_pts, nrc_pts = set(B.conic.points), set(B.nrc.points)
    for i, L in enumerate(B.lines):
        pts = set(L.points())
        if len(pts & conic_pts) != 1 or len(pts & nrc_pts) != 1:
            fails.append({"reason": "generator does not meet each directrix once", "generator": i})
    if len(B.affine_points) != q * (q + 1):
        fails.append({"reason": "affine point count", "count": len(B.affine_points)})
    P = spread.transversal_points[B.conic.element]
    for k in range(3):
        t = B.conic.parameter_of(E, P[k])
        gen = Subspace(E, 7, [B.conic.evaluate(E, t), B.nrc.evaluate(E, B.phi(E, t))])
        if gen != spread.transversals[k]:
            fails.append({"reason": "extended generator is not the transversal", "k": k})
    return fails


def extended_surface(bb, B):
    """Points of the extended surface over GF(q^3), with the generator parameter of each."""
    E = bb.ext
    out = {}
    for t in projective_line(E):
        line = Subspace(E, 7, [B.conic.evaluate(E, t), B.nrc.evaluate(E, B.phi(E, t))])
        for X in line.points():
            out.setdefault(X, t)
    return out


def verify_frobenius_fixed(bb, B):
    """The extended surface is Frobenius-stable and its fixed points are the rational surface."""
    E, q = bb.ext, bb.q
    frob = bb.tower.frobenius_table
    ext = extended_surface(bb, B)
    violations = []
    for X in ext:
        if conjugate_point(frob, X) not in ext:
            violations.append({"reason": "conjugate point off the extended surface", "point": list(X)})
            break
    rational = {X for X in ext if all(a < q for a in X)}
    expected = set(B.affine_points) | set(B.conic.points)
    if rational != expected:
        violations.append({
            "reason": "rational points of the extension differ from the generators",
            "extra": [list(X) for X in sorted(rational - expected)][:5],
            "missing": [list(X) for X in sorted(expected - rational)][:5],
        })
    if not B.phi.over_base:
        violations.append({"reason": "projectivity not over GF(q)"})
    # generator at t^q is the conjugate of the generator at t
    for t in projective_line(E)[:4]:
        tq = normalize(E, conjugate_point(frob, t))
        g1 = Subspace(E, 7, [B.conic.evaluate(E, t), B.nrc.evaluate(E, B.phi(E, t))])
        g2 = Subspace(E, 7, [B.conic.evaluate(E, tq), B.nrc.evaluate(E, B.phi(E, tq))])
        if Subspace(E, 7, [conjugate_point(frob, r) for r in g1.basis]) != g2:
            violations.append({"reason": "generators not Frobenius-equivariant", "t": list(t)})
    return {"extended_points": len(ext), "violations": violations, "pass": not violations}


# -- subplane correspondence ---------------------------------------------------------


def surface_to_subplane(bb, B):
    """Image in PG(2,q^3) of the surface's affine points, plus the tangent point T."""
    E, q = bb.ext, bb.q
    pts = [bb.point_to_plane(X) for X in B.affine_points]
    pts.append(B.tangent_point)
    S = Subplane(tuple(sorted(set(pts))), q)
    try:
        check_subplane(E, q, S)
    except SubplaneError as exc:
        raise TheoremViolation(f"surface image is not a subplane: {exc}", {"points": [list(p) for p in S.points]}) from None
    if S.infinite_points() != [B.tangent_point]:
        raise TheoremViolation("surface image is not tangent to ℓ∞", {"points": [list(p) for p in S.points]})
    return S


def subplane_directrices(bb, S):
    """Conic directrix and the q^2 NRC directrices of a tangent subplane."""
    spread, E, F, q = bb.spread, bb.ext, bb.base, bb.q
    T = S.tangent_point
    if T is None:
        raise GeometryError("subplane is not tangent to ℓ∞")
    pi = bb.infinite_point(T)
    lines = S.lines(E)
    through_T = sorted(L for L, pts in lines.items() if T in pts)
    others = sorted(L for L, pts in lines.items() if T not in pts)
    if len(through_T) != q + 1 or len(others) != q * q:
        raise TheoremViolation("wrong line structure", {"through_T": len(through_T), "others": len(others)})
    plane = spread.elements[pi]
    conic_pts = []
    for L in through_T:
        images = [bb.point_from_plane(X) for X in lines[L] if X != T]
        line6 = Subspace(F, 7, images[:2])
        if not all(line6.contains(X) for X in images):
            raise TheoremViolation("affine points of a line through T are not collinear", {"line": list(L)})
        X = meet(line6, spread.sigma_inf)
        if X.dim != 0 or not plane.contains(X.basis[0]):
            raise TheoremViolation("line through T does not meet π_T in a point", {"line": list(L)})
        conic_pts.append(X.basis[0])
    conic_pts = sorted(conic_pts)
    C = special_conic(spread, pi, conic_pts[0], conic_pts[1])
    if list(C.points) != conic_pts:
        raise TheoremViolation("conic directrix is not special", {"points": [list(X) for X in conic_pts]})
    curves = []
    for L in others:
        b = subline_through(E, q, *lines[L][:3])
        if tuple(sorted(b.points)) != lines[L]:
            raise TheoremViolation("subplane line is not a subline", {"line": list(L)})
        N = nrc_from_subline(bb, b)
        if N.element == pi or len(nrc_transversal_parameters(bb, N)) != 3:
            raise TheoremViolation("subline image is not a special NRC", {"line": list(L)})
        curves.append(N)
    return C, curves


def subplane_to_surface(bb, S, all_directrices=False):
    """Ruled surface of a tangent subplane; checks every NRC directrix gives it.

    Returns the surface built from the first NRC directrix, or with
    ``all_directrices`` the list of q^2 surfaces (one per NRC).
    """
    E = bb.ext
    C, curves = subplane_directrices(bb, S)
    images = tuple(sorted(bb.point_from_plane(X) for X in S.affine_points()))
    surfaces = []
    for N in curves if all_directrices else curves[:1]:
        B = build_ruled_surface(bb, C, N)
        if B.affine_points != images:
            raise TheoremViolation("surface from an NRC directrix differs from the subplane", {"alpha": N.element})
        surfaces.append(B)
    return surfaces if all_directrices else surfaces[0]


def check_forward(bb, S):
    """Properties (a)-(c) of the surface of one tangent subplane; returns failures."""
    spread, E, q = bb.spread, bb.ext, bb.q
    fails = []
    try:
        surfaces = subplane_to_surface(bb, S, all_directrices=True)
    except TheoremViolation as exc:
        return [{"reason": str(exc), **exc.payload}]
    B = surfaces[0]
    pi = bb.infinite_point(S.tangent_point)
    if B.conic.element != pi or not is_special_conic(spread, B.conic):
        fails.append({"reason": "(a) conic directrix not special in π_T"})
    for Bj in surfaces:
        if Bj.nrc.element == pi or not Bj.nrc.space.contains(spread.elements[Bj.nrc.element]):
            fails.append({"reason": "(a) NRC directrix not in a 3-space about another spread element"})
        if Bj.conic.form != B.conic.form:
            fails.append({"reason": "conic directrix not unique"})
    fails.extend(check_surface(bb, B))
    if len({Bj.nrc.key(E) for Bj in surfaces}) != q * q:
        fails.append({"reason": "NRC directrices not distinct"})
    if surface_to_subplane(bb, B).key != S.key:
        fails.append({"reason": "round trip does not return the subplane"})
    return fails


# -- triples ---------------------------------------------------------------------------


class TripleSource:
    """Special conics of π and special NRCs per 3-space, cached for enumeration."""

    def __init__(self, bb, pi):
        self.bb = bb
        self.pi = pi
        self.conics = enumerate_special_conics(bb.spread, pi)
        self.alphas = [a for a in range(len(bb.spread.elements)) if a != pi]
        self._spaces = {}
        self._nrcs = {}

    def spaces(self, alpha):
        if alpha not in self._spaces:
            self._spaces[alpha] = self.bb.spaces_about(alpha)
        return self._spaces[alpha]

    def nrcs(self, line):
        if line not in self._nrcs:
            self._nrcs[line] = enumerate_special_nrcs(self.bb, line)
        return self._nrcs[line]


def enumerate_triples(bb, pi, alphas=None):
    """Yield (conic, nrc, surface) over all choices, in a fixed order.

    ``alphas`` restricts the second spread element (for splitting work).
    """
    src = TripleSource(bb, pi)
    for C in src.conics:
        for alpha in alphas if alphas is not None else src.alphas:
            for L, _space in src.spaces(alpha):
                for N in src.nrcs(L):
                    yield C, N, build_ruled_surface(bb, C, N)


def random_triple(bb, src, rng):
    C = rng.choice(src.conics)
    alpha = rng.choice(src.alphas)
    L, _ = rng.choice(src.spaces(alpha))
    N = random_special_nrc(bb, L, rng)
    return C, N, build_ruled_surface(bb, C, N)


def non_special_conic(spread, i):
    """First non-degenerate conic of element i (by form order) that is not special."""
    q = spread.q
    for form in product(range(q), repeat=6):
        if not any(form) or normalize(spread.base, form) != form:
            continue
        try:
            C = conic_from_form(spread, i, form)
        except CurveError:
            continue
        if not is_special_conic(spread, C):
            return C
    raise CurveError("no non-special conic found")
