"""Self-loop counts from CM bookkeeping: the Frobenius census over F_ell and degree ledgers."""
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np
from sympy import factorint, isprime, n_order

from .classpoly import fundamental_part, hilbert_class_poly
from .errors import (EqualPrimes, GonalityUnknown, InconsistentTable, MissingClassNumber,
                     NonIntegralSolution, NormalizationFailure, SmallLevel, ValidationError)
from .fields import fp2, kronecker
from .isograph import supersingular_set
from .poly import ZZ, UniPoly

STRATEGIES = ("balanced", "literal")
DEFAULT_STRATEGY = "balanced"

# Delta_2 and Delta_3 factor tables: (-d, integer roots, exponent)
SMALL_LEVEL_TABLES = {
    2: ((-4, (1728,), 1), (-8, (8000,), 1), (-7, (-3375,), 2)),
    3: ((-3, (0, 54000), 1), (-8, (8000,), 2), (-11, (-32768,), 2)),
}

SUPERSINGULAR_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71)
GENUS_ZERO_LEVELS = (2, 3, 5, 7, 13)


@dataclass
class FrobTable:
    ell: int
    by_trace: dict
    special: dict = field(default_factory=dict)

    def census(self):
        """Every j in F_ell with the set of |a| it carries."""
        out = {}
        for a, js in self.by_trace.items():
            for j in js:
                out.setdefault(j, set()).add(a)
        for j, traces in self.special.items():
            if traces:
                out.setdefault(j, set()).update(traces)
        return out

    def rows(self):
        """(j, |a|) pairs sorted by j then |a|."""
        return sorted((j, a) for j, traces in self.census().items() for a in traces)


def _split_traces(ell, d):
    """a > 0 with a^2 - 4 ell = -d m^2 (d = 3 or 4)."""
    out = []
    for a in range(1, isqrt(4 * ell) + 1):
        r = 4 * ell - a * a
        if r > 0 and r % d == 0 and isqrt(r // d) ** 2 == r // d:
            out.append(a)
    return tuple(out)


@lru_cache(maxsize=None)
def frobenius_trace_table(ell):
    """Group j in F_ell by |trace| of y^2 = x^3 + 3t x + 2t, t = j / (1728 - j)."""
    if ell <= 3 or not isprime(ell):
        raise SmallLevel(f"census needs a prime level > 3, got {ell}")
    xs = np.arange(ell, dtype=np.int64)
    chi = np.full(ell, -1, dtype=np.int64)
    chi[(xs * xs) % ell] = 1
    chi[0] = 0
    cubes = xs * xs % ell * xs % ell
    j1728 = 1728 % ell
    by_trace = {a: set() for a in range(isqrt(4 * ell) + 1)}
    for j in range(ell):
        if j in (0, j1728):
            continue
        t = j * pow(1728 - j, -1, ell) % ell
        vals = (cubes + 3 * t * xs + 2 * t) % ell
        by_trace[abs(int(chi[vals].sum()))].add(j)
    special = {}
    if ell % 3 == 2:
        by_trace[0].add(0)
    else:
        special[0] = _split_traces(ell, 3)
    if ell % 4 == 3:
        by_trace[0].add(j1728)
    else:
        special[j1728] = _split_traces(ell, 4)
    return FrobTable(ell, {a: frozenset(s) for a, s in by_trace.items()}, special)


@dataclass(frozen=True)
class SuppEntry:
    a: int
    d: int  # the discriminant is -d
    m: int

    @property
    def disc(self):
        return -self.d


def supp(ell):
    """One entry (a, d, m) per 0 <= a < 2 sqrt(ell), with a^2 - 4 ell = -d m^2."""
    if ell <= 3:
        raise SmallLevel("levels 2 and 3 use explicit factor tables")
    out = []
    for a in range(isqrt(4 * ell) + 1):
        r = 4 * ell - a * a
        if r <= 0:
            continue
        d, m = fundamental_part(r)
        out.append(SuppEntry(a, d, m))
    return out


def chi(ell, d):
    """Trivial character mod ell: 0 when ell | d, else 1."""
    return 0 if d % ell == 0 else 1


def unit_count(d):
    return {3: 6, 4: 4}.get(d, 2)


def phi(d, n):
    out = Fraction(n)
    for q in factorint(n):
        out *= 1 - Fraction(kronecker(-d, q), q)
    return out


def _divisors(m):
    return [k for k in range(1, m + 1) if m % k == 0]


def degree_ratio(d, m):
    """h_{-d}(m) / h_{-d}(1) = 1 + (2/|O^x|) sum_{1 < n | m} phi(n)."""
    return 1 + Fraction(2, unit_count(d)) * sum(phi(d, n) for n in _divisors(m) if n > 1)


def degree_ratio_literal(d, m):
    """The displayed form with the n = 1 term kept inside the sum."""
    return Fraction(2, unit_count(d)) * sum(phi(d, n) for n in _divisors(m))


def h_dm(d, m, ledger):
    if d not in ledger.h1:
        raise MissingClassNumber(f"no class number recorded for discriminant {-d}")
    value = ledger.h1[d] * degree_ratio(d, m)
    if value.denominator != 1:
        raise InconsistentTable(f"h_{{{-d}}}({m}) = {value} is not an integer")
    return int(value)


@dataclass
class DegreeLedger:
    ell: int
    h1: dict = field(default_factory=dict)
    hm: dict = field(default_factory=dict)  # (a, d, m) -> observed degree of H_{-d,m}

    def chi(self, d):
        return chi(self.ell, d)


def observed_degree(table, entry):
    """deg H_{-d,m}: number of j in F_ell with trace +-a, counted with the add-backs."""
    if entry.a == 0:
        # the supersingular factor is a square mod ell
        return 2 * len(table.by_trace[0])
    extra = sum(1 for traces in table.special.values() if entry.a in traces)
    return len(table.by_trace[entry.a]) + extra


@lru_cache(maxsize=None)
def class_numbers_from_table(ell):
    table = frobenius_trace_table(ell)
    ledger = DegreeLedger(ell)
    for e in supp(ell):
        deg = observed_degree(table, e)
        ledger.hm[(e.a, e.d, e.m)] = deg
        h1 = Fraction(deg) / degree_ratio(e.d, e.m)
        if h1.denominator != 1 or h1 < 1:
            raise InconsistentTable(f"level {ell}: degree {deg} of H_{{{-e.d},{e.m}}} gives h = {h1}")
        if ledger.h1.setdefault(e.d, int(h1)) != h1:
            raise InconsistentTable(f"level {ell}: conflicting class numbers for {-e.d}")
    return ledger


def delta_degree(ell):
    """deg Delta_ell rebuilt from the ledger; 2 ell when the census is consistent."""
    ledger = class_numbers_from_table(ell)
    total = sum((1 + ledger.chi(e.d)) * h_dm(e.d, e.m, ledger) for e in supp(ell))
    return total - 2 * (1 + kronecker(-3, ell)) - (1 + kronecker(-4, ell))


def family_contributions(ell):
    """Degree of Delta_ell carried by each fundamental discriminant."""
    ledger = class_numbers_from_table(ell)
    out = Counter()
    for e in supp(ell):
        out[e.d] += (1 + ledger.chi(e.d)) * h_dm(e.d, e.m, ledger)
    out[3] -= 2 * (1 + kronecker(-3, ell))
    out[4] -= (1 + kronecker(-4, ell))
    return {d: c for d, c in out.items() if c}


def c_ell(ell, d):
    """Half of the degree that the CM family of Q(sqrt(-d)) contributes to Delta_ell."""
    contrib = family_contributions(ell)
    total = sum(contrib.values())
    if total != 2 * ell:
        raise NormalizationFailure(f"level {ell}: contributions sum to {total}, not {2 * ell}")
    value = contrib.get(d, 0)
    if value % 2:
        raise NormalizationFailure(f"level {ell}: odd contribution {value} for {-d}")
    return value // 2


def c_ell_all(ell):
    return {d: c_ell(ell, d) for d in sorted(family_contributions(ell))}


def _p_part(m, p):
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return p ** e


def epsilon(p, ell):
    if ell in SMALL_LEVEL_TABLES:
        # the only non-trivial m there is 2 (H_{-3,2} at level 3)
        return 2 if (ell, p) == (3, 2) else 0
    ledger = class_numbers_from_table(ell)
    total = 0
    for e in supp(ell):
        pe = _p_part(e.m, p)
        if pe == 1:
            continue
        weight = 1 - ledger.chi(e.d) * kronecker(-e.d, p)
        total += weight * (h_dm(e.d, e.m, ledger) - h_dm(e.d, e.m // pe, ledger))
    return total


def _exponent(strategy, k, chi_value):
    if strategy == "balanced":
        return Fraction((1 - k) * (1 + chi_value), 2)
    if strategy == "literal":
        return Fraction(1 - k, 1 + chi_value)
    raise ValidationError(f"unknown strategy {strategy!r}")


def _reduced_degree(d, m, p, ledger):
    """deg H_{-d,m,(p)} = h(1) + h(m) - h(p^e)."""
    pe = _p_part(m, p)
    return h_dm(d, 1, ledger) + h_dm(d, m, ledger) - h_dm(d, pe, ledger)


def _prefactors(p, ell):
    out = 0
    if kronecker(-3, p) == -1:
        out -= 2 * (1 + kronecker(-3, ell))
    if kronecker(-4, p) == -1:
        out -= 1 + kronecker(-4, ell)
    return out


def _small_level_terms(p, ell):
    for d, roots, mult in SMALL_LEVEL_TABLES[ell]:
        k = kronecker(d, p)
        if k == 1:
            continue
        exp = Fraction(mult, 2) if k == 0 else Fraction(mult)
        yield roots, exp


def trace_predict(p, ell, strategy=DEFAULT_STRATEGY):
    """deg of the supersingular part of Delta_ell mod p, i.e. the number of loops in the graph."""
    if p == ell:
        raise EqualPrimes(f"p = ell = {p}")
    if ell in SMALL_LEVEL_TABLES:
        total = sum(len(roots) * exp for roots, exp in _small_level_terms(p, ell))
        return _as_int(total)
    ledger = class_numbers_from_table(ell)
    total = Fraction(_prefactors(p, ell))
    for e in supp(ell):
        k = kronecker(-e.d, p)
        if k == 1:
            continue
        total += _exponent(strategy, k, ledger.chi(e.d)) * _reduced_degree(e.d, e.m, p, ledger)
    return _as_int(total)


def _as_int(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else x


def _class_factor(d, m, p):
    """H_{-d,m,(p)} = H_{-d} * prod over n | m with n not dividing p^e of H_{-d n^2}."""
    pe = _p_part(m, p)
    f = hilbert_class_poly(-d)
    for n in _divisors(m):
        if pe % n:
            f = f * hilbert_class_poly(-d * n * n)
    return f


def _order_mod_p(f, j0, p):
    F = fp2(p)
    g = UniPoly([F(c % p) for c in f.c], F)
    return g.order_at(j0)


def self_loops_per_vertex(p, ell, strategy=DEFAULT_STRATEGY):
    """Order of vanishing of the supersingular part of Delta_ell mod p at each j in S_p."""
    if p == ell:
        raise EqualPrimes(f"p = ell = {p}")
    S = supersingular_set(p)
    F = fp2(p)
    loops = {j: Fraction(0) for j in S}
    if ell in SMALL_LEVEL_TABLES:
        for roots, exp in _small_level_terms(p, ell):
            for r in roots:
                j = F(r)
                if j not in loops:
                    raise InconsistentTable(f"root {r} is not supersingular mod {p}")
                loops[j] += exp
        return {j: _as_int(v) for j, v in loops.items()}
    ledger = class_numbers_from_table(ell)
    for e in supp(ell):
        k = kronecker(-e.d, p)
        if k == 1:
            continue
        exp = _exponent(strategy, k, ledger.chi(e.d))
        f = _class_factor(e.d, e.m, p)
        for j in S:
            loops[j] += exp * _order_mod_p(f, j, p)
    if kronecker(-3, p) == -1:
        loops[F(0)] -= 2 * (1 + kronecker(-3, ell))
    if kronecker(-4, p) == -1:
        loops[F(1728)] -= 1 + kronecker(-4, ell)
    return {j: _as_int(v) for j, v in loops.items()}


def delta_from_class_polys(ell):
    """Delta_ell over the integers rebuilt as a product of class polynomials."""
    num = UniPoly([1], ZZ)
    for e in supp(ell):
        f = UniPoly([1], ZZ)
        for n in _divisors(e.m):
            f = f * hilbert_class_poly(-e.d * n * n)
        num = num * f ** (1 + chi(ell, e.d))
    den = UniPoly([0, 1], ZZ) ** (2 * (1 + kronecker(-3, ell))) * \
        UniPoly([-1728, 1], ZZ) ** (1 + kronecker(-4, ell))
    return num.exact_div(den)


TWO_VERTEX_SHAPES = {
    # matrix as a function of a, and the coefficient k in Tr = 2(ell + 1) - k a
    11: ((lambda L, a: [[L + 1 - 3 * a, 3 * a], [2 * a, L + 1 - 2 * a]]), 5),
    17: ((lambda L, a: [[L + 1 - 3 * a, 3 * a], [a, L + 1 - a]]), 4),
    19: ((lambda L, a: [[L + 1 - a, a], [2 * a, L + 1 - 2 * a]]), 3),
}


def two_vertex_solve(p, ell, trace=None, strategy=DEFAULT_STRATEGY):
    """Adjacency matrix for p in {11, 17, 19} from the predicted trace."""
    if p not in TWO_VERTEX_SHAPES:
        raise ValidationError(f"two-vertex solving applies to p in {{11, 17, 19}}, not {p}")
    shape, k = TWO_VERTEX_SHAPES[p]
    if trace is None:
        trace = trace_predict(p, ell, strategy)
    num = 2 * (ell + 1) - trace
    if not isinstance(trace, int) or num % k or num < 0:
        raise NonIntegralSolution(f"trace {trace} gives a = {Fraction(num) / k}")
    a = num // k
    M = shape(ell, a)
    if any(x < 0 for row in M for x in row):
        raise NonIntegralSolution(f"a = {a} makes a negative entry")
    return a, M


def _eps_mod4(m):
    return 1 if m % 4 == 2 else 0


def difficulty(p, ell):
    """(graph-method field exponent, modular-curve gonality, genus of X_0(p))."""
    if p == ell:
        raise EqualPrimes(f"p = ell = {p}")
    if ell == 2:
        ord_p2, ord_p = 1, 1
    else:
        ord_p2 = int(n_order(p * p % ell, ell))
        ord_p = int(n_order(p % ell, ell))
    gm = 2 * ord_p2 - _eps_mod4(ord_p)
    if ell in GENUS_ZERO_LEVELS:
        mc = 1
    elif ell in SUPERSINGULAR_PRIMES:
        mc = 2
    else:
        raise GonalityUnknown(f"no gonality recorded for level {ell}")
    tr = len(supersingular_set(p)) - 1
    return gm, mc, tr
