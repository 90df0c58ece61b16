"""Dense univariate polynomials over F_p, F_{p^2}, towers, or the integers.

Coefficients are stored lowest degree first. The coefficient ring is an
object from ``fields`` (``GF``, ``Fp2``, ``Tower``) or ``ZZ`` below.
"""
from fractions import Fraction
from math import gcd as igcd

from .errors import ExactDivisionFailure, NotSquarefree, ValidationError, ZeroPolynomial
from .fields import GF


class IntegerRing:
    is_field = False
    characteristic = 0
    zero = 0
    one = 1

    def __call__(self, x):
        return int(x)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


ZZ = IntegerRing()


def _strip(c):
    while c and not c[-1]:
        c.pop()
    return c


class UniPoly:
    __slots__ = ("c", "R")

    def __init__(self, coeffs, R):
        if isinstance(R, GF):
            p = R.p
            coeffs = [x % p for x in coeffs]
        else:
            coeffs = list(coeffs)
        self.c = _strip(coeffs)
        self.R = R

    @classmethod
    def _raw(cls, c, R):
        obj = object.__new__(cls)
        obj.c = _strip(c)
        obj.R = R
        return obj

    @classmethod
    def from_roots(cls, roots, R):
        f = cls([R.one], R)
        for r in roots:
            f = f * cls([-r, R.one], R)
        return f

    def degree(self):
        return len(self.c) - 1

    def lc(self):
        return self.c[-1] if self.c else self.R.zero

    def is_zero(self):
        return not self.c

    def coeff(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.R.zero

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.c))

    def __repr__(self):
        return f"UniPoly({[str(x) for x in self.c]}, {self.R!r})"

    def _lift(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other], self.R)

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        if isinstance(self.R, GF):
            p = self.R.p
            out = [x % p for x in out]
        return UniPoly._raw(out, self.R)

    __radd__ = __add__

    def __neg__(self):
        if isinstance(self.R, GF):
            p = self.R.p
            return UniPoly._raw([-x % p for x in self.c], self.R)
        return UniPoly._raw([-x for x in self.c], self.R)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            if isinstance(self.R, GF):
                return UniPoly([x * other for x in self.c], self.R)
            return UniPoly._raw([x * other for x in self.c], self.R)
        a, b = self.c, other.c
        if not a or not b:
            return UniPoly._raw([], self.R)
        if isinstance(self.R, GF):
            return UniPoly._raw(_mul_gf(a, b, self.R.p), self.R)
        out = [self.R.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
        return UniPoly._raw(out, self.R)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = UniPoly([self.R.one], self.R)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.c):
            acc = acc * x + c
        if isinstance(self.R, GF) and isinstance(acc, int):
            acc %= self.R.p
        return acc

    def derivative(self):
        R = self.R
        out = [self.c[i] * i for i in range(1, len(self.c))]
        return UniPoly(out, R)

    def monic(self):
        if not self.c:
            return self
        R = self.R
        if not R.is_field:
            if self.lc() in (1, -1):
                return self * self.lc()
            raise ValidationError("cannot make an integer polynomial monic")
        inv = R.inv(self.lc())
        return self * inv

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        R = self.R
        if isinstance(R, GF):
            q, r = _divmod_gf(self.c, other.c, R.p)
            return UniPoly._raw(q, R), UniPoly._raw(r, R)
        a = list(self.c)
        b = other.c
        db = len(b) - 1
        lead = b[-1]
        if R.is_field:
            inv = R.inv(lead)
        q = [R.zero] * max(len(a) - db, 0)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if not c:
                continue
            if R.is_field:
                t = c * inv
            else:
                t, rem = divmod(c, lead)
                if rem:
                    raise ExactDivisionFailure("non-exact integer polynomial division")
            q[i - db] = t
            for j in range(db + 1):
                a[i - db + j] = a[i - db + j] - t * b[j]
        return UniPoly._raw(q, R), UniPoly._raw(a[:db], R)

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactDivisionFailure("claimed exact polynomial division left a remainder")
        return q

    def map(self, R, fn=None):
        """Coefficient-wise conversion into ring R (e.g. reduce integers mod p)."""
        fn = R if fn is None else fn
        return UniPoly([fn(x) for x in self.c], R)

    def order_at(self, r):
        """Multiplicity of r as a root (field coefficients)."""
        if self.is_zero():
            raise ZeroPolynomial("order of vanishing of the zero polynomial")
        lin = UniPoly([-r, self.R.one], self.R)
        f, k = self, 0
        while True:
            q, rem = f.divmod(lin)
            if not rem.is_zero():
                return k
            f, k = q, k + 1


def _mul_gf(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                out[i + j] += x * y
    return [x % p for x in out]


def _divmod_gf(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    bb = [x * inv % p for x in b]
    q = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if not c:
            continue
        q[i - db] = c * inv % p
        for j in range(db):
            a[i - db + j] -= c * bb[j]
        a[i] = 0
    return q, [x % p for x in a[:db]]


def X(R):
    return UniPoly([R.zero, R.one], R)


def gcd(f, g):
    """Monic Euclidean gcd over a field; gcd(f, 0) = monic(f)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def lcm(f, g):
    return (f * g // gcd(f, g)).monic()


def powmod(base, e, f):
    result = UniPoly([f.R.one], f.R) % f
    base = base % f
    while e:
        if e & 1:
            result = (result * base) % f
        base = (base * base) % f
        e >>= 1
    return result


def powmod_frobenius(f, k):
    """y^(p^k) mod f, p the characteristic of the coefficient field."""
    if f.degree() < 1:
        raise ValidationError("modulus must have positive degree")
    h = X(f.R) % f
    for _ in range(k):
        h = powmod(h, f.R.characteristic, f)
    return h


def resultant(f, g):
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    if f.R.is_field:
        return _resultant_field(f, g)
    return _resultant_zz(list(f.c), list(g.c))


def _resultant_field(A, B):
    R = A.R
    res = R.one
    while True:
        m, n = A.degree(), B.degree()
        if n == 0:
            return _times(R, res, _power(R, B.lc(), m))
        r = A % B
        if r.is_zero():
            return R.zero
        factor = _power(R, B.lc(), m - r.degree())
        if m % 2 and n % 2:
            factor = -factor
        res = _times(R, res, factor)
        A, B = B, r


def _times(R, a, b):
    if isinstance(R, GF):
        return a * b % R.p
    return a * b


def _power(R, a, e):
    if isinstance(R, GF):
        return pow(a, e, R.p)
    return a ** e


def _content(c):
    g = 0
    for x in c:
        g = igcd(g, x)
    return g


def _prem(A, B):
    """Pseudo-remainder: lc(B)^(degA-degB+1) A mod B over the integers."""
    a = list(A)
    db = len(B) - 1
    lead = B[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        a = [x * lead for x in a]
        for j in range(db + 1):
            a[i - db + j] -= c * B[j]
    # the loop ran degA-degB+1 times, matching the pseudo-division exponent
    return _strip(a[:db])


def _resultant_zz(A, B):
    """Subresultant algorithm over Z (fraction free)."""
    dA, dB = len(A) - 1, len(B) - 1
    if dB == 0:
        return B[0] ** dA
    if dA == 0:
        return A[0] ** dB
    ca, cb = _content(A), _content(B)
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    t = ca ** dB * cb ** dA
    s = 1
    if dA < dB:
        A, B = B, A
        if dA % 2 and dB % 2:
            s = -1
    g = h = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _prem(A, B)
        if not R:
            return 0
        A = B
        div = g * h ** delta
        B = [x // div for x in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)
        if len(B) == 1:
            dA = len(A) - 1
            h = B[0] ** dA // h ** (dA - 1) if dA >= 1 else h
            return s * t * h


def sylvester_det(f, g):
    """Resultant as the Bareiss determinant of the Sylvester matrix (integer or field)."""
    m, n = f.degree(), g.degree()
    size = m + n
    if size == 0:
        return f.R.one
    R = f.R
    rows = []
    fc = list(reversed(f.c))
    gc = list(reversed(g.c))
    for i in range(n):
        rows.append([R.zero] * i + fc + [R.zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([R.zero] * i + gc + [R.zero] * (size - n - 1 - i))
    return bareiss(rows, R)


def bareiss(M, R):
    M = [list(r) for r in M]
    n = len(M)
    sign = 1
    prev = R.one
    p = R.p if isinstance(R, GF) else None
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return R.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                if p is not None:
                    M[i][j] = num * pow(prev, -1, p) % p
                elif R.is_field:
                    M[i][j] = num / prev
                else:
                    M[i][j] = num // prev
        prev = M[k][k]
    det = M[n - 1][n - 1]
    if sign < 0:
        det = -det
    if p is not None:
        det %= p
    return det


def radical(f):
    """Monic squarefree polynomial with the same roots (perfect coefficient field)."""
    if f.is_zero():
        raise ZeroPolynomial("radical of the zero polynomial")
    f = f.monic()
    if f.degree() <= 0:
        return UniPoly([f.R.one], f.R)
    d = f.derivative()
    if d.is_zero():
        return radical(_pth_root(f))
    g = gcd(f, d)
    r = (f // g).monic()
    if g.degree() == 0:
        return r
    return lcm(r, radical(g))


def _pth_root(f):
    R = f.R
    p = R.characteristic
    return UniPoly([R.pth_root(f.c[i]) for i in range(0, len(f.c), p)], R)


def is_squarefree(f):
    return gcd(f, f.derivative()).degree() == 0


def count_quadratic_factors(f):
    """Number of irreducible quadratic factors of a squarefree f over F_q."""
    if f.degree() <= 0:
        return 0
    if not is_squarefree(f):
        raise NotSquarefree("count_quadratic_factors needs a squarefree input")
    f = f.monic()
    q = f.R.q if hasattr(f.R, "q") else f.R.p
    y = X(f.R)
    h1 = powmod(y, q, f)
    g1 = gcd(f, h1 - y)
    f2 = f // g1
    if f2.degree() <= 0:
        return 0
    h2 = powmod(h1 % f2, q, f2)
    g2 = gcd(f2, h2 - y)
    return g2.degree() // 2


def solve_monic_quadratic(a, b):
    """Roots of x^2 - a x + b over F_{p^2}, or None if they lie outside."""
    F = a.F
    disc = a * a - 4 * b
    r = F.sqrt(disc)
    if r is None:
        return None
    half = F(2).inverse()
    return sorted([(a + r) * half, (a - r) * half], key=F.key)


def interpolate(xs, ys, R):
    """Coefficients of the unique polynomial of degree < len(xs) through the points.

    Over ZZ the computation is done in Q and the result must be integral.
    """
    n = len(xs)
    if R is ZZ or not R.is_field:
        ys = [Fraction(y) for y in ys]
        one = Fraction(1)
        div = lambda u, v: u / v
    else:
        one = R.one
        div = lambda u, v: u * R.inv(v)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = div(coef[i] - coef[i - 1], xs[i] - xs[i - j])
    # expand the Newton form
    out = [coef[n - 1]]
    for k in range(n - 2, -1, -1):
        new = [0 * one] * (len(out) + 1)
        for i, c in enumerate(out):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * xs[k]
        new[0] = new[0] + coef[k]
        out = new
    if R is ZZ or not R.is_field:
        for c in out:
            if c.denominator != 1:
                raise ExactDivisionFailure("interpolated polynomial is not integral")
        return UniPoly([int(c) for c in out], R)
    return UniPoly(out, R)
