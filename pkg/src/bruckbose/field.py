"""Finite field tower GF(p) <= GF(q) <= GF(q^3).

Elements are plain ints ("codes").  An element of an extension of degree d
over a base field of order r is the polynomial a_0 + a_1 x + ... in the
extension variable, stored as ``sum(a_i * r**i)``.  Because the codes nest,
an element of GF(q) has the same code inside GF(q^3), and addition is always
digitwise modulo p in base p.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np


class FieldError(ValueError):
    pass


def _factor_prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            h, r = 0, q
            while r % p == 0:
                r //= p
                h += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return p, h
    raise FieldError(f"{q} is not a prime power")


class FiniteField:
    """A finite field with table-driven arithmetic on integer codes.

    Built either as a prime field (``base=None``) or as a simple extension
    of ``base`` by the monic polynomial with lower coefficients ``modulus``
    (constant term first).  The class of the extension variable must be
    primitive; this is checked.
    """

    def __init__(self, p, base=None, modulus=None):
        self.p = p
        self.base = base
        if base is None:
            self.order = p
            self.degree = 1
            self.modulus = None
            add = (np.arange(p)[:, None] + np.arange(p)[None, :]) % p
            mul = (np.arange(p)[:, None] * np.arange(p)[None, :]) % p
            self.add = add.tolist()
            self.mul = mul.tolist()
            self.generator = next(g for g in range(1, p) if _mult_order(self, g) == p - 1)
        else:
            r = base.order
            d = len(modulus)
            self.order = r**d
            self.degree = d
            self.modulus = tuple(modulus)
            self.add = _digitwise_add_table(p, self.order)
            self.mul = _extension_mul_table(base, self.modulus)
            self.generator = r
        n = self.order
        self.neg = [0] * n
        for a in range(n):
            self.neg[a] = self.add[a].index(0)
        self.sub = [[self.add[a][self.neg[b]] for b in range(n)] for a in range(n)]
        self.inv = [0] * n
        for a in range(1, n):
            self.inv[a] = self.mul[a].index(1)
        # exp/log w.r.t. the generator
        self.exp = [1] * (n - 1)
        self.log = [0] * n
        x = 1
        for k in range(n - 1):
            self.exp[k] = x
            self.log[x] = k
            x = self.mul[x][self.generator]
        if x != 1 or len(set(self.exp)) != n - 1:
            raise FieldError("generator is not primitive")

    def __repr__(self):
        return f"GF({self.order})"

    def __len__(self):
        return self.order

    def elements(self):
        return range(self.order)

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        return self.exp[(self.log[a] * k) % (self.order - 1)]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        return self.mul[a][self.inv[b]]

    def digits(self, a):
        """Coefficients of ``a`` over the immediate base field."""
        r = self.base.order if self.base is not None else self.order
        out = []
        for _ in range(self.degree):
            out.append(a % r)
            a //= r
        return tuple(out)

    def from_digits(self, ds):
        r = self.base.order if self.base is not None else self.order
        return sum(d * r**i for i, d in enumerate(ds))

    # polynomials are coefficient lists, constant term first

    def poly_eval(self, coeffs, x):
        add, mul = self.add, self.mul
        acc = 0
        for c in reversed(coeffs):
            acc = add[mul[acc][x]][c]
        return acc

    def poly_mul(self, f, g):
        add, mul = self.add, self.mul
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] = add[out[i + j]][mul[a][b]]
        return out


def _mult_order(F, a):
    x, k = a, 1
    while x != 1:
        x = F.mul[x][a]
        k += 1
    return k


def _digitwise_add_table(p, n):
    if p == 2:
        a = np.arange(n)
        return (a[:, None] ^ a[None, :]).tolist()
    a = np.arange(n)
    out = np.zeros((n, n), dtype=np.int64)
    place = 1
    while place < n:
        da = (a // place) % p
        out += ((da[:, None] + da[None, :]) % p) * place
        place *= p
    return out.tolist()


def _extension_mul_table(K, modulus):
    """Multiplication table of K[x]/(x^d + ...) via powers of x."""
    r, d = K.order, len(modulus)
    n = r**d
    add, mul, neg = K.add, K.mul, [K.add[a].index(0) for a in range(r)]

    def times_x(v):
        top = v[-1]
        shifted = [0] + v[:-1]
        return [add[s][mul[neg[top]][m]] for s, m in zip(shifted, modulus)]

    exp = []
    v = [1] + [0] * (d - 1)
    seen = set()
    for _ in range(n - 1):
        code = sum(c * r**i for i, c in enumerate(v))
        if code in seen:
            raise FieldError("modulus is not primitive")
        seen.add(code)
        exp.append(code)
        v = times_x(v)
    if sum(c * r**i for i, c in enumerate(v)) != 1:
        raise FieldError("modulus is not primitive")
    log = np.zeros(n, dtype=np.int64)
    exp_arr = np.array(exp, dtype=np.int64)
    log[exp_arr] = np.arange(n - 1)
    idx = (log[:, None] + log[None, :]) % (n - 1)
    table = exp_arr[idx]
    table[0, :] = 0
    table[:, 0] = 0
    return table.tolist()


def _is_primitive(K, modulus):
    r, d = K.order, len(modulus)
    if modulus[0] == 0:
        return False
    add, mul = K.add, K.mul
    neg = [K.add[a].index(0) for a in range(r)]
    v = [1] + [0] * (d - 1)
    one = list(v)
    for k in range(1, r**d):
        top = v[-1]
        shifted = [0] + v[:-1]
        v = [add[s][mul[neg[top]][m]] for s, m in zip(shifted, modulus)]
        if v == one:
            return k == r**d - 1
    return False


def smallest_primitive_polynomial(K, d):
    """Lexicographically smallest monic primitive polynomial of degree d over K.

    Returned as the full coefficient list, constant term first (leading 1
    included).  Candidates are ordered as base-|K| numbers with the constant
    term least significant, so for GF(8) this picks y^3 + y + 1.
    """
    for high in product(range(K.order), repeat=d):
        low = high[::-1]
        if _is_primitive(K, low):
            return list(low) + [1]
    raise FieldError(f"no primitive polynomial of degree {d} over {K}")


class FieldTower:
    """GF(p) <= GF(q) <= GF(q^3) with Frobenius and the vec/unvec maps.

    ``base`` is GF(q), ``ext`` is GF(q^3); ``omega`` is the class of the
    cubic extension variable, primitive in GF(q^3).
    """

    def __init__(self, q):
        p, h = _factor_prime_power(q)
        if not 2 <= q <= 9:
            raise FieldError(f"unsupported q={q}; need a prime power 2 <= q <= 9")
        self.q, self.p, self.h = q, p, h
        self.prime = FiniteField(p)
        self.base_poly = smallest_primitive_polynomial(self.prime, h)
        if h == 1:
            self.base = self.prime
        else:
            self.base = FiniteField(p, self.prime, self.base_poly[:-1])
        self.ext_poly = smallest_primitive_polynomial(self.base, 3)
        self.ext = FiniteField(p, self.base, self.ext_poly[:-1])
        self.omega = q
        E = self.ext
        self._frob = [E.pow(a, q) for a in range(E.order)]

    def __repr__(self):
        return f"FieldTower(q={self.q})"

    def frobenius(self, a):
        return self._frob[a]

    @property
    def frobenius_table(self):
        return self._frob

    def in_base(self, a):
        return a < self.q

    def vec(self, a):
        q = self.q
        return (a % q, (a // q) % q, a // (q * q))

    def unvec(self, u):
        q = self.q
        return u[0] + u[1] * q + u[2] * q * q

    def multiplication_matrix(self, a):
        """3x3 matrix over GF(q) of x -> a*x in the basis (1, w, w^2), acting on columns."""
        cols = [self.vec(self.ext.mul[a][self.ext.pow(self.omega, j)]) for j in range(3)]
        return [[cols[j][i] for j in range(3)] for i in range(3)]

    def norm(self, a):
        f = self._frob
        m = self.ext.mul
        return m[m[a][f[a]]][f[f[a]]]

    def describe(self):
        return {
            "q": self.q,
            "p": self.p,
            "h": self.h,
            "base_polynomial": list(self.base_poly),
            "extension_polynomial": list(self.ext_poly),
            "omega": self.omega,
            "omega_vec": list(self.vec(self.omega)),
        }

    def minimal_polynomial_roots(self, coeffs):
        """All roots in GF(q^3), with multiplicity, of a polynomial over GF(q^3).

        ``coeffs`` is constant term first.  Raises on the zero polynomial.
        """
        E = self.ext
        f = list(coeffs)
        while f and f[-1] == 0:
            f.pop()
        if not f:
            raise FieldError("zero polynomial has no finite root set")
        roots = []
        for x in range(E.order):
            while len(f) > 1 and E.poly_eval(f, x) == 0:
                roots.append(x)
                f = _deflate(E, f, x)
        return roots


def _deflate(F, f, x):
    """Quotient of f by (t - x), assuming x is a root."""
    n = len(f) - 1
    out = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = F.add[F.mul[acc][x]][f[i]]
        out[i - 1] = acc
    return out


@lru_cache(maxsize=None)
def tower(q):
    """Shared FieldTower instance for ``q`` (towers are immutable)."""
    return FieldTower(q)
