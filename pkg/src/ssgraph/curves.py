"""Elliptic curve models, point arithmetic, torsion subgroups and isogenies."""
import random
from dataclasses import dataclass

import numpy as np
from sympy import n_order

from .errors import BadKernelOrder, EqualPrimes, ValidationError, WrongGroupStructure
from .fields import Fp2Element, least_nonresidue

DEFAULT_SEED = 0xA11CE

SHAPES = ("short", "twotor", "search")


@dataclass(frozen=True)
class CurveModel:
    """shape 'short': y^2 = x^3 + A x + B            coeffs (A, B)
    shape 'twotor': y^2 = x (x^2 + a x + b)         coeffs (a, b)
    shape 'search': y^2 = (x - c)(x^2 - d)          coeffs (c, d)
    """
    shape: str
    coeffs: tuple
    field: object

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValidationError(f"unknown curve shape {self.shape!r}")
        u, v = self.coeffs
        if self.shape == "short":
            disc = 4 * u * u * u + 27 * v * v
        elif self.shape == "twotor":
            disc = v * (u * u - 4 * v)
        else:
            disc = v * (u * u - v)
        if not disc:
            raise ValidationError(f"singular model {self}")

    def __str__(self):
        return f"{self.shape}({self.coeffs[0]}, {self.coeffs[1]})"

    def cubic(self):
        """(a2, a4, a6) with y^2 = x^3 + a2 x^2 + a4 x + a6."""
        u, v = self.coeffs
        zero = self.field.zero
        if self.shape == "short":
            return zero, u, v
        if self.shape == "twotor":
            return u, v, zero
        return -u, -v, u * v

    def to_short(self):
        if self.shape == "short":
            return self
        a2, a4, a6 = self.cubic()
        inv3 = self.field(3).inverse()
        A = a4 - a2 * a2 * inv3
        B = 2 * a2 * a2 * a2 * inv3 * inv3 * inv3 - a2 * a4 * inv3 + a6
        return CurveModel("short", (A, B), self.field)

    def lift(self, F):
        """The same equation over an extension field F."""
        return CurveModel(self.shape, tuple(F.embed(c) for c in self.coeffs), F)


def short(A, B, F):
    return CurveModel("short", (F(A), F(B)), F)


def twotor(a, b, F):
    return CurveModel("twotor", (F(a), F(b)), F)


def search_model(c, d, F):
    return CurveModel("search", (F(c), F(d)), F)


def j_invariant(E):
    A, B = E.to_short().coeffs
    A3 = 4 * A * A * A
    return 1728 * A3 / (A3 + 27 * B * B)


def quadratic_twist(E, nonsquare=None):
    """Short(A,B) -> Short(c^2 A, c^3 B); c defaults to the least nonresidue of F_p."""
    S = E.to_short()
    F = E.field
    c = F(least_nonresidue(F.p)) if nonsquare is None else nonsquare
    A, B = S.coeffs
    return CurveModel("short", (c * c * A, c * c * c * B), F)


def _rational_coeffs(E):
    out = []
    for x in E.cubic():
        base = E.field.to_base(x)
        if base is None or not base.is_rational():
            raise ValidationError("point counting over F_p needs F_p coefficients")
        out.append(base.a)
    return out


def count_points_fp(E):
    """#E(F_p) by the Legendre-symbol sum."""
    p = E.field.p
    a2, a4, a6 = _rational_coeffs(E)
    xs = np.arange(p, dtype=np.int64)
    vals = (((xs + a2) * xs % p + a4) * xs + a6) % p
    chi = np.full(p, -1, dtype=np.int64)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return int(p + 1 + chi[vals].sum())


def is_supersingular(obj, p=None):
    """For a model over F_p: #E(F_p) = p + 1. For a j label: membership in S_p."""
    if isinstance(obj, CurveModel):
        return count_points_fp(obj) == obj.field.p + 1
    from .isograph import supersingular_set

    return obj in supersingular_set(p)


def minimal_torsion_field(p, ell):
    """Order of p^2 in (Z/ell)^*: E[ell] is rational over F_{p^(2n)}."""
    if p == ell:
        raise EqualPrimes(f"p = ell = {p}")
    if ell == 2:
        return 1
    return int(n_order(p * p % ell, ell))


# points: None is the point at infinity, otherwise an (x, y) tuple on a short model

def add(E, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 == y2 and y1:
            lam = (3 * x1 * x1 + E.coeffs[0]) / (2 * y1)
        else:
            return None
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def neg(P):
    return None if P is None else (P[0], -P[1])


def mul(E, k, P):
    if k < 0:
        return mul(E, -k, neg(P))
    R = None
    while k:
        if k & 1:
            R = add(E, R, P)
        P = add(E, P, P)
        k >>= 1
    return R


def on_curve(E, P):
    if P is None:
        return True
    A, B = E.coeffs
    x, y = P
    return y * y == x * x * x + A * x + B


def _key(F, P):
    return (0,) if P is None else (1,) + F.key(P[0]) + F.key(P[1])


def random_point(E, rng):
    F = E.field
    A, B = E.coeffs
    while True:
        x = F.random(rng)
        y = F.sqrt(x * x * x + A * x + B)
        if y is not None:
            return (x, y)


def _rng_for(E, ell, seed):
    tag = f"{seed}:{ell}:{E.field!r}:{E.coeffs[0]}:{E.coeffs[1]}"
    return random.Random(tag)


def torsion_subgroups(E, ell, N, seed=DEFAULT_SEED, budget_factor=64):
    """The ell + 1 cyclic subgroups of order ell, given E(F_q) = Z/N x Z/N.

    Returns one generator per subgroup: <Q1> and <Q2 + k Q1> for k = 0..ell-1.
    """
    E = E.to_short()
    if N % ell:
        raise WrongGroupStructure(f"{ell} does not divide the torsion exponent {N}")
    rng = _rng_for(E, ell, seed)
    expected = 7 if ell == 2 else 6
    cof = N // ell
    Q1 = None
    H1 = None
    for _ in range(budget_factor * expected):
        Q = mul(E, cof, random_point(E, rng))
        if Q is None:
            continue
        if mul(E, ell, Q) is not None:
            raise WrongGroupStructure("point order exceeds ell after cofactor multiplication")
        if Q1 is None:
            Q1 = Q
            H1 = set()
            R = None
            for _ in range(ell):
                H1.add(_key(E.field, R))
                R = add(E, R, Q1)
            continue
        if _key(E.field, Q) in H1:
            continue
        gens = [Q1]
        R = Q
        for _ in range(ell):
            gens.append(R)
            R = add(E, R, Q1)
        return gens
    raise WrongGroupStructure(f"no full {ell}-torsion found on {E} within the trial budget")


def subgroup_points(E, P, ell):
    pts = []
    R = P
    for _ in range(ell - 1):
        pts.append(R)
        R = add(E, R, P)
    return pts


def velu_quotient(E, P, ell):
    """Codomain of the isogeny with kernel <P> (ell odd, P of exact order ell)."""
    E = E.to_short()
    if ell < 3 or ell % 2 == 0:
        raise BadKernelOrder("velu_quotient handles odd ell; use two_isogeny_step for ell = 2")
    if P is None or mul(E, ell, P) is not None:
        raise BadKernelOrder(f"kernel generator does not have order {ell}")
    A, B = E.coeffs
    v = E.field.zero
    w = E.field.zero
    R = P
    for _ in range((ell - 1) // 2):
        if R is None:
            raise BadKernelOrder(f"kernel generator has order smaller than {ell}")
        x, y = R
        gx = 3 * x * x + A
        vq = 2 * gx
        uq = 4 * y * y
        v = v + vq
        w = w + uq + x * vq
        R = add(E, R, P)
    return CurveModel("short", (A - 5 * v, B - 7 * w), E.field)


def two_isogeny_step(m):
    """The three 2-isogenous codomains of y^2 = x(x^2 + a x + b).

    Kernel (0,0) first, then the kernels at the roots r of x^2 + a x + b in
    canonical order; each is moved to the origin by x -> x + r first.
    """
    F = m.field
    a, b = m.coeffs
    disc = a * a - 4 * b
    s = F.sqrt(disc)
    if s is None:
        raise ValidationError("2-torsion is not rational over the working field")
    half = F(2).inverse()
    roots = sorted({F.key(r): r for r in ((-a + s) * half, (-a - s) * half)}.values(), key=F.key)
    if len(roots) == 1:
        raise ValidationError("singular two-torsion model")
    out = [CurveModel("twotor", (-2 * a, a * a - 4 * b), F)]
    for r in roots:
        ai = a + 3 * r
        bi = -a * r - 2 * b
        out.append(CurveModel("twotor", (-2 * ai, ai * ai - 4 * bi), F))
    return out


def two_torsion_subgroups(m):
    """Generators (x, 0) of the three order-2 subgroups of a TwoTor model."""
    F = m.field
    a, b = m.coeffs
    s = F.sqrt(a * a - 4 * b)
    half = F(2).inverse()
    roots = sorted([(-a + s) * half, (-a - s) * half], key=F.key)
    return [(F.zero, F.zero)] + [(r, F.zero) for r in roots]


def encode_model(E):
    return {"shape": E.shape, "coeffs": [str(c) for c in E.coeffs]}
