"""Modular-curve scan for the isogeny graph, the supersingular polynomials and Ob(p, ell)."""
from collections import Counter

import numpy as np

from .errors import EqualPrimes, ValidationError
from .fields import GF, check_prime, fp2
from .isograph import IsogenyGraph, aut_weight, complete_self_loops, supersingular_set
from .modular_data import hauptmodul, load_atkin
from .poly import X, UniPoly, count_quadratic_factors, powmod, radical


class VecFp2:
    """Array arithmetic on F_{p^2} = F_p[w]/(w^2 - n), elements as (u, v) int64 arrays."""

    def __init__(self, p, n):
        self.p = p
        self.n = n
        self._inv = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)

    def all_elements(self):
        p = self.p
        idx = np.arange(p * p, dtype=np.int64)
        return idx // p, idx % p

    def mul(self, x, y):
        p, n = self.p, self.n
        (a, b), (c, d) = x, y
        return (a * c + n * (b * d % p)) % p, (a * d + b * c) % p

    def horner(self, coeffs, y):
        p = self.p
        acc = (np.zeros_like(y[0]), np.zeros_like(y[0]))
        for c in reversed(coeffs):
            u, v = self.mul(acc, y)
            acc = ((u + c) % p, v)
        return acc

    def inverse(self, x):
        p, n = self.p, self.n
        a, b = x
        norm = (a * a - n * (b * b % p)) % p
        ni = self._inv[norm]
        return a * ni % p, (-b) % p * ni % p

    def encode(self, x):
        return x[0] + self.p * x[1]


def _code(F, j):
    return j.a + F.p * j.b


def gamma_star_counts(p, ell, atkin=None, data_dir=None):
    """Counts of y0 in F_{p^2} with x^2 - a(y0) x + b(y0) = (x - j1)(x - j2), j1 != j2 supersingular."""
    check_prime(p)
    if p == ell:
        raise EqualPrimes(f"p = ell = {p}")
    R = atkin if atkin is not None else load_atkin(ell, data_dir)
    F = fp2(p)
    S = supersingular_set(p)
    pairs = {}
    q = p * p
    for i, j1 in enumerate(S):
        for j2 in S[i + 1:]:
            s, t = j1 + j2, j1 * j2
            pairs[_code(F, s) + q * _code(F, t)] = (j1, j2)
    if not pairs:
        return {}, S
    V = VecFp2(p, F.n)
    y = V.all_elements()
    av = V.encode(V.horner([c % p for c in R.a], y))
    bv = V.encode(V.horner([c % p for c in R.b], y))
    keys = av + q * bv
    wanted = np.fromiter(pairs, dtype=np.int64)
    hits = keys[np.isin(keys, wanted)]
    uniq, cnt = np.unique(hits, return_counts=True)
    return {pairs[int(k)]: int(c) for k, c in zip(uniq, cnt)}, S


def mc_method(p, ell, atkin=None, data_dir=None):
    """Graph from point counts on the Atkin model, with Aut weights and loop completion."""
    counts, S = gamma_star_counts(p, ell, atkin, data_dir)
    edges = Counter()
    for (j1, j2), k in counts.items():
        edges[(j1, j2)] += k * aut_weight(j1)
        edges[(j2, j1)] += k * aut_weight(j2)
    return complete_self_loops(IsogenyGraph(p, ell, S, edges))


def hauptmodul_gamma_star(p, ell):
    """Loop-free edge multiset from the genus-zero parametrisation t -> (j(t), j(n/t))."""
    model = hauptmodul(ell)
    F = fp2(p)
    S = supersingular_set(p)
    V = VecFp2(p, F.n)
    u, v = V.all_elements()
    keep = (u != 0) | (v != 0)
    t = (u[keep], v[keep])
    num = [c % p for c in model.j_num.c]

    def j_of(x):
        return V.mul(V.horner(num, x), V.inverse(x))

    other = V.mul((np.full_like(t[0], model.n_ell % p), np.zeros_like(t[0])), V.inverse(t))
    # j_num(t)/t has a pole only at t = 0, so both ends are finite here
    c1 = V.encode(j_of(t))
    c2 = V.encode(j_of(other))
    code = {_code(F, j): j for j in S}
    wanted = np.fromiter(code, dtype=np.int64)
    mask = np.isin(c1, wanted) & np.isin(c2, wanted) & (c1 != c2)
    uniq, cnt = np.unique(c1[mask] * (p * p) + c2[mask], return_counts=True)
    edges = Counter()
    for k, c in zip(uniq, cnt):
        j1, j2 = code[int(k) // (p * p)], code[int(k) % (p * p)]
        edges[(j1, j2)] += int(c) * aut_weight(j1)
    return IsogenyGraph(p, ell, S, edges)


def _small_char_check(p):
    if p in (2, 3):
        return
    check_prime(p)


def ss_poly(p):
    """prod_{j in S_p} (x - j) over F_{p^2}; for p in {2, 3} this is x."""
    if p in (2, 3):
        K = GF(p)
        return UniPoly([0, 1], K)
    F = fp2(p)
    return UniPoly.from_roots(supersingular_set(p), F)


def ss_poly_fp(p):
    f = ss_poly(p)
    if isinstance(f.R, GF):
        return f
    if any(not c.is_rational() for c in f.c):
        raise ValidationError("supersingular polynomial is not defined over F_p")
    return UniPoly([c.a for c in f.c], GF(p))


def ss_plus_poly(p, ell, atkin=None, data_dir=None):
    """rad Res_x(x^2 - a(y) x + b(y), s_p(x)) over F_p."""
    _small_char_check(p)
    if p == ell:
        raise EqualPrimes(f"p = ell = {p}")
    R = atkin if atkin is not None else load_atkin(ell, data_dir)
    K = GF(p)
    A, B = R.polys(K)
    s = ss_poly_fp(p)
    zero = UniPoly([], K)
    # s(x) mod (x^2 - A x + B) = u x + v, by Horner with x (u x + v) = (u A + v) x - u B
    u, v = zero, zero
    for c in reversed(s.c):
        u, v = u * A + v, -(u * B) + UniPoly([c], K)
    res = v * v + A * u * v + B * u * u
    return radical(res)


def splits_over_fp2(f):
    """Every irreducible factor of the squarefree f has degree 1 or 2."""
    if f.degree() <= 0:
        return True
    y = X(f.R)
    q = f.R.p
    return (powmod(y, q * q, f) - y) % f == UniPoly([], f.R)


def ob(p, ell, atkin=None, data_dir=None):
    """Number of irreducible quadratic factors of the level-ell supersingular polynomial over F_p."""
    if p == ell:
        raise EqualPrimes(f"Ob is undefined for p = ell = {p}")
    return count_quadratic_factors(ss_plus_poly(p, ell, atkin, data_dir))


def ob_table(primes, levels, data_dir=None):
    """Matrix rows indexed by levels, columns by primes; None on the diagonal."""
    atkin = {ell: load_atkin(ell, data_dir) for ell in levels}
    M = [[None if p == ell else ob(p, ell, atkin[ell]) for p in primes] for ell in levels]
    common = sorted(set(primes) & set(levels))
    pi = {p: i for i, p in enumerate(primes)}
    li = {ell: i for i, ell in enumerate(levels)}
    asym = [(x, y) for x in common for y in common
            if x < y and M[li[x]][pi[y]] != M[li[y]][pi[x]]]
    return M, {"symmetric": not asym, "asymmetric_pairs": asym, "checked": common}


def ob_table_csv(primes, levels, M):
    lines = ["ell\\p," + ",".join(str(p) for p in primes)]
    for ell, row in zip(levels, M):
        lines.append(f"{ell}," + ",".join("-" if x is None else str(x) for x in row))
    return "\n".join(lines) + "\n"

