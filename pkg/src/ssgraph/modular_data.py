"""Atkin data R(x, y) = x^2 - a(y) x + b(y), hauptmodul models, and the derived F and Delta."""
import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import (BadDegree, ChecksumMismatch, CongruenceFailure, CuspInput, MalformedData,
                     NotMonic, UnknownLevel, ValidationError)
from .fields import GF, fp2
from .poly import ZZ, UniPoly, interpolate, resultant

BUILTIN_LEVELS = (2, 3, 5, 7, 11, 13, 17, 19)
DATA_ENV = "SSGRAPH_DATA"


@dataclass(frozen=True)
class AtkinData:
    ell: int
    a: tuple
    b: tuple
    source: str = "builtin"

    def eval(self, y0, field=None):
        """(a(y0), b(y0)); integers when no field is given."""
        if field is None:
            return _horner(self.a, y0), _horner(self.b, y0)
        A = UniPoly(self.a, field) if isinstance(field, GF) else UniPoly([field(c) for c in self.a], field)
        B = UniPoly(self.b, field) if isinstance(field, GF) else UniPoly([field(c) for c in self.b], field)
        return A(y0), B(y0)

    def polys(self, R=ZZ):
        if R is ZZ:
            return UniPoly(self.a, ZZ), UniPoly(self.b, ZZ)
        if isinstance(R, GF):
            return UniPoly(self.a, R), UniPoly(self.b, R)
        return UniPoly([R(c) for c in self.a], R), UniPoly([R(c) for c in self.b], R)

    def to_dict(self):
        return {"ell": self.ell, "a": [str(c) for c in self.a], "b": [str(c) for c in self.b]}


def _horner(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def eval_atkin(R, y0, field=None):
    return R.eval(y0, field)


def _builtin_dir():
    return resources.files("ssgraph") / "data" / "atkin"


def data_dirs(data_dir=None):
    """Search order: explicit directory, then SSGRAPH_DATA, then the packaged data."""
    out = []
    if data_dir:
        out.append(Path(data_dir))
    env = os.environ.get(DATA_ENV)
    if env:
        out.append(Path(env))
    out.append(_builtin_dir())
    return out


def _read_checked(path):
    raw = path.read_bytes()
    sums = path.parent / "checksums.json"
    if sums.is_file():
        try:
            table = json.loads(sums.read_text())
        except ValueError as exc:
            raise MalformedData(f"unreadable checksum file {sums}: {exc}") from None
        want = table.get(path.name)
        if want is not None and hashlib.sha256(raw).hexdigest() != want:
            raise ChecksumMismatch(f"checksum mismatch for {path}")
    return raw


def parse_atkin(raw, source="file"):
    try:
        data = json.loads(raw)
        ell = int(data["ell"])
        a = tuple(int(str(c)) for c in data["a"])
        b = tuple(int(str(c)) for c in data["b"])
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedData(f"malformed Atkin data ({source}): {exc}") from None
    return AtkinData(ell, a, b, source)


def validate_atkin(R, congruence=True):
    ell = R.ell
    if len(R.a) != ell + 1 or len(R.b) != ell + 2:
        raise BadDegree(f"level {ell}: expected degrees ({ell}, {ell + 1}), "
                        f"got ({len(R.a) - 1}, {len(R.b) - 1})")
    if R.a[-1] != 1 or R.b[-1] != 1:
        raise NotMonic(f"level {ell}: a and b must be monic")
    if congruence and not kronecker_congruence_holds(R):
        raise CongruenceFailure(f"level {ell}: Delta mod {ell} is not a unit times (x^{ell} - x)^2")
    return R


@lru_cache(maxsize=None)
def _load_cached(ell, dirs):
    for d in dirs:
        path = Path(d) / f"atkin_{ell}.json" if not hasattr(d, "joinpath") else d / f"atkin_{ell}.json"
        if path.is_file():
            R = parse_atkin(_read_checked(path), str(path))
            if R.ell != ell:
                raise MalformedData(f"{path} declares level {R.ell}")
            return validate_atkin(R)
    raise UnknownLevel(f"no Atkin data for level {ell}")


def load_atkin(ell_or_path, data_dir=None):
    """Validated Atkin data for a level (searching the data directories) or a file."""
    if isinstance(ell_or_path, int):
        dirs = tuple(str(d) if isinstance(d, Path) else d for d in data_dirs(data_dir))
        return _load_cached(ell_or_path, dirs)
    path = Path(ell_or_path)
    if not path.is_file():
        raise UnknownLevel(f"no such data file {path}")
    return validate_atkin(parse_atkin(_read_checked(path), str(path)))


def available_levels(data_dir=None):
    found = set()
    for d in data_dirs(data_dir):
        d = Path(str(d))
        if d.is_dir():
            for f in d.glob("atkin_*.json"):
                stem = f.stem.split("_", 1)[1]
                if stem.isdigit():
                    found.add(int(stem))
    return sorted(found)


# Delta via the double-root condition: a(y) = 2x and b(y) = x^2

def _delta_value(R, x0, ring):
    A, B = R.polys(ring)
    return resultant(A - 2 * x0, B - x0 * x0)


def delta_by_resultant(R):
    """Res_y(a(y) - 2x, b(y) - x^2) over the integers."""
    xs = list(range(2 * R.ell + 1))
    ys = [_delta_value(R, x0, ZZ) for x0 in xs]
    return interpolate(xs, ys, ZZ)


def kronecker_congruence_holds(R):
    ell = R.ell
    if ell < 5:
        delta = delta_by_resultant(R).map(GF(ell))
    else:
        F = fp2(ell)
        pts = []
        for x in F.elements():
            pts.append(x)
            if len(pts) == 2 * ell + 1:
                break
        delta = interpolate(pts, [_delta_value(R, x0, F) for x0 in pts], F)
        if any(not c.is_rational() for c in delta.c):
            return False
        delta = UniPoly([c.a for c in delta.c], GF(ell))
    K = GF(ell)
    target = UniPoly([0, -1] + [0] * (ell - 2) + [1], K) ** 2
    if delta.degree() != 2 * ell:
        return False
    return delta == target * delta.lc()


# The bivariate F(x, j) = Res_y(R(x, y), R(j, y)) / (x - j)^(ell + 1)

def _fiber(R, x0):
    """R(x0, y) as an integer polynomial in y."""
    coeffs = [bc - x0 * ac for bc, ac in zip(R.b, R.a + (0,))]
    coeffs[0] += x0 * x0
    return UniPoly(coeffs, ZZ)


@lru_cache(maxsize=None)
def _classical(ell, a, b):
    R = AtkinData(ell, a, b)
    n = ell + 2
    xs = list(range(n))
    js = list(range(n, 2 * n))
    fibers = {v: _fiber(R, v) for v in xs + js}
    rows = []
    for x0 in xs:
        vals = []
        for j0 in js:
            r = resultant(fibers[x0], fibers[j0])
            d = (x0 - j0) ** (ell + 1)
            q, rem = divmod(r, d)
            if rem:
                from .errors import ExactDivisionFailure

                raise ExactDivisionFailure(f"level {ell}: resultant not divisible by (x - j)^{ell + 1}")
            vals.append(q)
        rows.append(interpolate(js, vals, ZZ))
    # rows[i] is F(xs[i], j); interpolate each j-coefficient in x
    coeff = [[0] * n for _ in range(n)]
    for k in range(n):
        col = interpolate(xs, [row.coeff(k) for row in rows], ZZ)
        for i in range(n):
            coeff[i][k] = col.coeff(i)
    # the resultant fixes F only up to sign; take the one with F(x, x) monic
    if coeff[n - 2][n - 2] + coeff[n - 1][n - 3] + coeff[n - 3][n - 1] < 0:
        coeff = [[-c for c in row] for row in coeff]
    return tuple(tuple(r) for r in coeff)


class ModularPoly:
    """Integer bivariate polynomial, coeffs[i][k] multiplies x^i j^k."""

    def __init__(self, ell, coeffs):
        self.ell = ell
        self.coeffs = coeffs

    def __call__(self, x, j):
        acc = 0
        for row in reversed(self.coeffs):
            inner = 0
            for c in reversed(row):
                inner = inner * j + c
            acc = acc * x + inner
        return acc

    def is_symmetric(self):
        n = len(self.coeffs)
        return all(self.coeffs[i][k] == self.coeffs[k][i] for i in range(n) for k in range(n))

    def degrees(self):
        dx = max(i for i, row in enumerate(self.coeffs) if any(row))
        dj = max(k for row in self.coeffs for k, c in enumerate(row) if c)
        return dx, dj

    def diagonal(self):
        n = len(self.coeffs)
        out = [0] * (2 * n - 1)
        for i in range(n):
            for k in range(n):
                out[i + k] += self.coeffs[i][k]
        return UniPoly(out, ZZ)

    def reduce(self, p):
        return [[c % p for c in row] for row in self.coeffs]


def classical_modular_poly(ell, data_dir=None):
    R = load_atkin(ell, data_dir)
    return ModularPoly(ell, _classical(ell, R.a, R.b))


def delta_poly(ell, data_dir=None):
    """Delta(x) = F(x, x) over the integers."""
    return classical_modular_poly(ell, data_dir).diagonal()


def delta_mod(ell, p, data_dir=None):
    return delta_poly(ell, data_dir).map(GF(p), lambda c: c % p)


# Genus-zero hauptmodul models: j(t) = P(t) / t with Fricke involution t -> n / t

def _zpoly(*factors):
    out = UniPoly([1], ZZ)
    for coeffs, e in factors:
        out = out * UniPoly(list(coeffs), ZZ) ** e
    return out


def _models():
    return {
        2: (_zpoly(([16, 1], 3)), 4096),
        3: (_zpoly(([27, -1], 1), ([-3, 1], 3)), 729),
        5: (_zpoly(([5, 10, 1], 3)), 125),
        7: (_zpoly(([-1], 1), ([49, -13, 1], 1), ([1, -5, 1], 3)), 49),
        13: (_zpoly(([-1], 1), ([13, -5, 1], 1), ([1, -19, 20, -7, 1], 3)), 13),
    }


_MODELS = _models()
HAUPTMODUL_LEVELS = (3, 5, 7, 13)


@dataclass(frozen=True)
class HauptmodulModel:
    ell: int
    j_num: UniPoly
    j_den: UniPoly
    n_ell: int


def hauptmodul(ell):
    if ell not in HAUPTMODUL_LEVELS:
        raise UnknownLevel(f"no hauptmodul model for level {ell}")
    P, n = _MODELS[ell]
    return HauptmodulModel(ell, P, UniPoly([0, 1], ZZ), n)


def hauptmodul_pair(ell, t0, field=None):
    """(j(t0), j(n / t0)) for the two ends of the dual isogeny pair."""
    P, n = hauptmodul(ell).j_num, hauptmodul(ell).n_ell
    if field is None:
        t0 = Fraction(t0)
        if t0 == 0:
            raise CuspInput("t = 0 is a cusp")
        other = Fraction(n) / t0
        return P(t0) / t0, P(other) / other
    t0 = field(t0) if isinstance(t0, int) else t0
    if not t0:
        raise CuspInput("t = 0 is a cusp")
    Pf = P.map(field, lambda c: field(c))
    other = field(n) / t0
    return Pf(t0) / t0, Pf(other) / other


def _laurent_add(u, v, scale=1):
    out = dict(u)
    for e, c in v.items():
        out[e] = out.get(e, 0) + scale * c
    return {e: c for e, c in out.items() if c}


def _laurent_mul(u, v):
    out = {}
    for e1, c1 in u.items():
        for e2, c2 in v.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _in_trace_coordinate(L, n):
    """Write a Laurent polynomial invariant under t -> n/t as a polynomial in s = t + n/t."""
    top = max(L)
    out = [0] * (top + 1)
    s = {1: 1, -1: n}
    powers = [{0: 1}]
    for _ in range(top):
        powers.append(_laurent_mul(powers[-1], s))
    for k in range(top, -1, -1):
        c = L.get(k, 0)
        if c:
            out[k] = c
            L = _laurent_add(L, powers[k], -c)
    if L:
        raise ValidationError("Laurent polynomial is not Fricke-invariant")
    return out


def atkin_from_hauptmodul(ell):
    """Atkin data from a genus-zero model, in the coordinate y = lc(P) (t + n/t)."""
    if ell not in _MODELS:
        raise UnknownLevel(f"no hauptmodul model for level {ell}")
    P, n = _MODELS[ell]
    j1 = {e - 1: c for e, c in enumerate(P.c) if c}
    # t P(n/t) / n
    j2 = {}
    for e, c in enumerate(P.c):
        if c:
            num = c * n ** e
            if num % n:
                raise ValidationError("non-integral Fricke image")
            j2[1 - e] = num // n
    sign = P.lc()
    a = _in_trace_coordinate(_laurent_add(j1, j2), n)
    b = _in_trace_coordinate(_laurent_mul(j1, j2), n)
    a = tuple(c * sign ** k for k, c in enumerate(a))
    b = tuple(c * sign ** k for k, c in enumerate(b))
    return AtkinData(ell, a, b, "hauptmodul")
