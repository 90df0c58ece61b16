"""Exact arithmetic in F_p, F_{p^2} = F_p[w]/(w^2 - n) and towers over F_{p^2}.

Elements of F_p are plain ints. Elements of F_{p^2} and of the towers are
small immutable objects with the usual operators. Every field object exposes
the same handful of methods (``zero``, ``one``, ``q``, ``random``, ``sqrt``,
``nonsquare``, ``embed``, ``to_base``, ``key``) so curve code is shape-agnostic.
"""
from functools import lru_cache
from itertools import count

from sympy import isprime, factorint

from .errors import FieldTooLarge, ValidationError

DEFAULT_FIELD_CAP = 1 << 64


def check_prime(p, minimum=5):
    if not isinstance(p, int) or p < minimum or not isprime(p):
        raise ValidationError(f"expected a prime >= {minimum}, got {p!r}")
    return p


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(d, n):
    """Kronecker symbol (d/n) for a prime n (n = 2 included)."""
    if n == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    return legendre(d, n)


@lru_cache(maxsize=None)
def least_nonresidue(p):
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise ValidationError(f"no quadratic nonresidue mod {p}")


def sqrt_fp(a, p):
    """Tonelli-Shanks; returns the root in [0, (p-1)/2] or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if legendre(a, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        r = pow(a, (p + 1) // 4, p)
    else:
        m = s
        c = pow(least_nonresidue(p), q, p)
        t = pow(a, q, p)
        r = pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


class GF:
    """The prime field as a coefficient ring for polynomials (elements are ints)."""

    is_field = True

    def __init__(self, p):
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __call__(self, x):
        return x % self.p

    def inv(self, x):
        return pow(x, -1, self.p)

    def pth_root(self, x):
        return x

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class Fp2Element:
    __slots__ = ("a", "b", "F")

    def __init__(self, a, b, F):
        self.a = a
        self.b = b
        self.F = F

    def _coerce(self, other):
        if isinstance(other, Fp2Element):
            return other
        if isinstance(other, int):
            return Fp2Element(other % self.F.p, 0, self.F)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.F.p
        return Fp2Element((self.a + o.a) % p, (self.b + o.b) % p, self.F)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.F.p
        return Fp2Element((self.a - o.a) % p, (self.b - o.b) % p, self.F)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.F.p
        return Fp2Element(-self.a % p, -self.b % p, self.F)

    def __mul__(self, other):
        F = self.F
        p = F.p
        if isinstance(other, int):
            return Fp2Element(self.a * other % p, self.b * other % p, F)
        if not isinstance(other, Fp2Element):
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        return Fp2Element((a * c + F.n * b * d) % p, (a * d + b * c) % p, F)

    __rmul__ = __mul__

    def norm(self):
        p = self.F.p
        return (self.a * self.a - self.F.n * self.b * self.b) % p

    def conj(self):
        return Fp2Element(self.a, -self.b % self.F.p, self.F)

    def inverse(self):
        N = self.norm()
        if N == 0:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        p = self.F.p
        Ni = pow(N, -1, p)
        return Fp2Element(self.a * Ni % p, -self.b * Ni % p, self.F)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = Fp2Element(1, 0, self.F)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Fp2Element):
            return self.a == other.a and self.b == other.b
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.F.p
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def is_rational(self):
        return self.b == 0

    def __str__(self):
        return str(self.a) if self.b == 0 else f"{self.a}+{self.b}*w"

    def __repr__(self):
        return f"Fp2({self})"


class Fp2:
    """F_{p^2} = F_p[w]/(w^2 - n), n the least nonresidue unless overridden."""

    def __init__(self, p, n=None):
        self.p = p
        if n is None:
            n = least_nonresidue(p)
        if legendre(n, p) != -1:
            raise ValidationError(f"{n} is not a nonresidue mod {p}")
        self.n = n % p
        self.q = p * p
        self.k = 1
        self.characteristic = p
        self.is_field = True
        self.zero = Fp2Element(0, 0, self)
        self.one = Fp2Element(1, 0, self)
        self.w = Fp2Element(0, 1, self)
        self._nonsquare = None

    def __call__(self, a, b=0):
        if isinstance(a, Fp2Element):
            return a
        return Fp2Element(a % self.p, b % self.p, self)

    def __eq__(self, other):
        return isinstance(other, Fp2) and (other.p, other.n) == (self.p, self.n)

    def __hash__(self):
        return hash(("Fp2", self.p, self.n))

    def __repr__(self):
        return f"Fp2({self.p}, n={self.n})"

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield Fp2Element(a, b, self)

    def random(self, rng):
        return Fp2Element(rng.randrange(self.p), rng.randrange(self.p), self)

    def key(self, x):
        return (x.a, x.b)

    def embed(self, x):
        return self(x)

    def to_base(self, x):
        return x

    def inv(self, x):
        return x.inverse()

    def pth_root(self, x):
        return x.conj()

    def is_square(self, x):
        return (not x) or legendre(x.norm(), self.p) == 1

    def sqrt(self, s):
        return sqrt_fp2(s)

    def nonsquare(self):
        if self._nonsquare is None:
            self._nonsquare = next(x for x in self.elements() if x and not self.is_square(x))
        return self._nonsquare

    def parse(self, text):
        text = text.strip()
        if "w" not in text:
            return self(int(text))
        a, b = text.replace("*w", "").split("+")
        return self(int(a), int(b))


@lru_cache(maxsize=None)
def fp2(p):
    return Fp2(p)


def _canonical_sign(F, r):
    s = -r
    return r if F.key(r) <= F.key(s) else s


def sqrt_fp2(s):
    """Square root in F_{p^2} by reduction to two square roots in F_p."""
    F = s.F
    p, n = F.p, F.n
    a, b = s.a, s.b
    if b == 0:
        r = sqrt_fp(a, p)
        if r is not None:
            return Fp2Element(r, 0, F)
        y = sqrt_fp(a * pow(n, -1, p), p)
        return _canonical_sign(F, Fp2Element(0, y, F))
    # x^2 + n y^2 = a and 2xy = b give 4n Y^2 - 4a Y + b^2 = 0 with Y = y^2
    root_disc = sqrt_fp(a * a - n * b * b, p)
    if root_disc is None:
        return None
    inv2n = pow(2 * n, -1, p)
    for Y in ((a + root_disc) * inv2n % p, (a - root_disc) * inv2n % p):
        y = sqrt_fp(Y, p)
        if y is not None and y != 0:
            x = b * pow(2 * y, -1, p) % p
            return _canonical_sign(F, Fp2Element(x, y, F))
    return None


class TowerElement:
    __slots__ = ("c", "F")

    def __init__(self, c, F):
        self.c = c
        self.F = F

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            return other
        if isinstance(other, (int, Fp2Element)):
            return self.F.embed(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TowerElement(tuple(x + y for x, y in zip(self.c, o.c)), self.F)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TowerElement(tuple(x - y for x, y in zip(self.c, o.c)), self.F)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TowerElement(tuple(-x for x in self.c), self.F)

    def __mul__(self, other):
        if isinstance(other, (int, Fp2Element)):
            return TowerElement(tuple(x * other for x in self.c), self.F)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.F._mul(self.c, other.c)

    __rmul__ = __mul__

    def inverse(self):
        return self.F._inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.F.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            return self.c == other.c
        if isinstance(other, (int, Fp2Element)):
            return self.c == self.F.embed(other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __str__(self):
        return "[" + ";".join(str(x) for x in self.c) + "]"

    __repr__ = __str__


class Tower:
    """F_{p^{2k}} = F_{p^2}[z]/(g) with g the canonical irreducible modulus."""

    def __init__(self, p, k, cap=None):
        cap = DEFAULT_FIELD_CAP if cap is None else cap
        if p ** (2 * k) >= cap:
            raise FieldTooLarge(f"F_{{{p}^{2 * k}}} exceeds the field cap {cap}")
        self.p = p
        self.k = k
        self.q = p ** (2 * k)
        self.characteristic = p
        self.is_field = True
        self.base = fp2(p)
        B = self.base
        self.modulus = canonical_modulus(B, k)
        self.zero = TowerElement((B.zero,) * k, self)
        self.one = TowerElement((B.one,) + (B.zero,) * (k - 1), self)
        self._nonsquare = None

    def __eq__(self, other):
        return isinstance(other, Tower) and (other.p, other.k) == (self.p, self.k)

    def __hash__(self):
        return hash(("Tower", self.p, self.k))

    def __repr__(self):
        return f"Tower({self.p}, {self.k})"

    def __call__(self, x):
        return self.embed(x)

    def embed(self, x):
        if isinstance(x, TowerElement):
            return x
        B = self.base
        return TowerElement((B(x),) + (B.zero,) * (self.k - 1), self)

    def to_base(self, x):
        if any(x.c[1:]):
            return None
        return x.c[0]

    def key(self, x):
        return tuple(v for c in x.c for v in (c.a, c.b))

    def random(self, rng):
        return TowerElement(tuple(self.base.random(rng) for _ in range(self.k)), self)

    def _mul(self, u, v):
        k = self.k
        B = self.base
        prod = [B.zero] * (2 * k - 1)
        for i, x in enumerate(u):
            if x:
                for j, y in enumerate(v):
                    prod[i + j] = prod[i + j] + x * y
        g = self.modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k):
                    prod[i - k + j] = prod[i - k + j] - c * g[j]
        return TowerElement(tuple(prod[:k]), self)

    def _inverse(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero in tower field")
        if self.k == 2:
            c0, c1 = x.c
            g0, g1 = self.modulus
            N = c0 * c0 - g1 * c0 * c1 + g0 * c1 * c1
            Ni = N.inverse()
            return TowerElement(((c0 - g1 * c1) * Ni, -c1 * Ni), self)
        return x ** (self.q - 2)

    def inv(self, x):
        return x.inverse()

    def pth_root(self, x):
        return x ** (self.q // self.p)

    def frobenius(self, x, j=1):
        return x ** (self.p ** j)

    def is_square(self, x):
        return (not x) or x ** ((self.q - 1) // 2) == self.one

    def sqrt(self, s):
        return sqrt_generic(self, s)

    def elements(self):
        """All elements, first coefficient most significant."""
        B = self.base
        base_elems = list(B.elements())
        for idx in range(self.q):
            digits = []
            for _ in range(self.k):
                idx, r = divmod(idx, B.q)
                digits.append(base_elems[r])
            yield TowerElement(tuple(reversed(digits)), self)

    def nonsquare(self):
        if self._nonsquare is None:
            for x in self.elements():
                if x and not self.is_square(x):
                    self._nonsquare = x
                    break
        return self._nonsquare


def _is_irreducible(B, g):
    """Rabin's test for a monic g over the field B (coefficient list, low first)."""
    from .poly import UniPoly, gcd, powmod

    f = UniPoly(g, B)
    k = f.degree()
    X = UniPoly([B.zero, B.one], B)
    q = B.q

    def frob_power(r):
        h = X
        for _ in range(r):
            h = powmod(h, q, f)
        return h

    if frob_power(k) != X % f:
        return False
    for r in factorint(k):
        if gcd(frob_power(k // r) - X, f).degree() != 0:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(B, k):
    """Smallest monic irreducible degree-k polynomial over B in lexicographic
    order of (c_{k-1}, ..., c_0), each coefficient compared by its (a, b) pair."""
    if k == 1:
        return (B.zero,)
    base_elems = list(B.elements())
    for idx in count():
        digits = []
        for _ in range(k):
            idx, r = divmod(idx, B.q)
            digits.append(base_elems[r])
        coeffs = digits  # digits[0] is c_0, the least significant
        if not coeffs[0]:
            continue
        if _is_irreducible(B, coeffs + [B.one]):
            return tuple(coeffs)


def sqrt_generic(F, s):
    """Tonelli-Shanks over any field object with .q, .one and .nonsquare()."""
    if not s:
        return F.zero
    q = F.q
    if s ** ((q - 1) // 2) != F.one:
        return None
    Q, S = q - 1, 0
    while Q % 2 == 0:
        Q //= 2
        S += 1
    z = F.nonsquare()
    M, c, t, r = S, z ** Q, s ** Q, s ** ((Q + 1) // 2)
    while t != F.one:
        i, t2 = 0, t
        while t2 != F.one:
            t2 = t2 * t2
            i += 1
        b = c
        for _ in range(M - i - 1):
            b = b * b
        M, c = i, b * b
        t, r = t * c, r * b
    return _canonical_sign(F, r)


def build_tower(p, k, cap=None):
    """F_{p^{2k}}: the quadratic extension itself for k = 1, a tower otherwise."""
    cap = DEFAULT_FIELD_CAP if cap is None else cap
    if k < 1:
        raise ValidationError("tower degree must be positive")
    if p ** (2 * k) >= cap:
        raise FieldTooLarge(f"F_{{{p}^{2 * k}}} exceeds the field cap {cap}")
    if k == 1:
        return fp2(p)
    return _tower(p, k, cap)


@lru_cache(maxsize=None)
def _tower(p, k, cap):
    return Tower(p, k, cap)


def sqrt_tower(s, cap=None):
    F = s.F
    cap = DEFAULT_FIELD_CAP if cap is None else cap
    if F.q >= cap:
        raise FieldTooLarge(f"field of size {F.q} exceeds the cap {cap}")
    return F.sqrt(s)


def label_key(x):
    """Canonical vertex order: F_p labels ascending, then conjugate pairs by (a, b)."""
    return (x.b != 0, x.a, x.b)
