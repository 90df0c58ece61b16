"""Hilbert class polynomials for small discriminants, evaluated analytically.

Only |D| up to a few hundred are needed, so the product over reduced forms of
(x - j(tau)) is computed in high precision and rounded to integers.
"""
from functools import lru_cache
from math import gcd, isqrt

import mpmath

from .errors import ValidationError
from .poly import ZZ, UniPoly


def reduced_forms(D):
    """Primitive reduced forms (a, b, c) with b^2 - 4ac = D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValidationError(f"{D} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                out.append((a, b, c))
        a += 1
    return out


def class_number(D):
    return len(reduced_forms(D))


@lru_cache(maxsize=None)
def hilbert_class_poly(D):
    forms = reduced_forms(D)
    # the largest |j| is about exp(pi sqrt|D|) for the principal form
    digits = sum(mpmath.pi * mpmath.sqrt(-D) / a for a, _, _ in forms) / mpmath.log(10)
    dps = int(digits) + 30
    while True:
        with mpmath.workdps(dps):
            sq = mpmath.sqrt(mpmath.mpf(-D))
            coeffs = [mpmath.mpc(1)]
            for a, b, _ in forms:
                tau = mpmath.mpc(-b, sq) / (2 * a)
                j = 1728 * mpmath.kleinj(tau)
                nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
                for i, c in enumerate(coeffs):
                    nxt[i + 1] += c
                    nxt[i] -= c * j
                coeffs = nxt
            ints = [int(mpmath.nint(c.real)) for c in coeffs]
            ok = all(abs(c.real - n) < mpmath.mpf("1e-8") and abs(c.imag) < mpmath.mpf("1e-8")
                     for c, n in zip(coeffs, ints))
        if ok:
            return UniPoly(ints, ZZ)
        dps *= 2


def fundamental_part(n):
    """Write n = d m^2 with -d a fundamental discriminant (n > 0)."""
    m = 1
    core = n
    k = 2
    while k * k <= core:
        while core % (k * k) == 0:
            core //= k * k
            m *= k
        k += 1
    # now n = core * m^2 with core squarefree
    if (-core) % 4 == 1:
        return core, m
    if m % 2:
        raise ValidationError(f"{-n} is not a discriminant")
    return 4 * core, m // 2


def is_fundamental(D):
    if D >= 0:
        return False
    d, m = fundamental_part(-D)
    return m == 1


def squarefree(n):
    return all(n % (k * k) for k in range(2, isqrt(n) + 1))
