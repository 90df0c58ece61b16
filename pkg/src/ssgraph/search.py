"""Locate one supersingular curve over F_p with rotated Legendre vectors."""
from dataclasses import dataclass

import numpy as np

from .curves import CurveModel, j_invariant, twotor
from .errors import ValidationError
from .fields import check_prime, fp2, legendre, least_nonresidue


@dataclass(frozen=True)
class SearchOutcome:
    model: CurveModel
    j0: object

    def as_record(self):
        a, b = self.model.coeffs
        return {"p": self.model.field.p, "model": {"shape": "twotor", "a": str(a), "b": str(b)},
                "j0": str(self.j0)}


def legendre_table(p):
    chi = np.full(p, -1, dtype=np.int64)
    xs = np.arange(p, dtype=np.int64)
    chi[(xs * xs) % p] = 1
    chi[0] = 0
    return chi


def legendre_vectors(p, d):
    """v_0[x] = (x/p) and w_d[x] = ((x^2 - d)/p)."""
    if legendre(d, p) != -1:
        raise ValidationError(f"{d} is a square mod {p}")
    chi = legendre_table(p)
    xs = np.arange(p, dtype=np.int64)
    return chi.copy(), chi[(xs * xs - d) % p]


def find_supersingular(p):
    """Return the first supersingular TwoTor model over F_p in the scan order."""
    check_prime(p)
    F = fp2(p)
    if p % 4 == 3:
        model = twotor(0, -1, F)
        return SearchOutcome(model, j_invariant(model))
    d = least_nonresidue(p)
    v0, wd = legendre_vectors(p, d)
    # (v_c)_x = (v_0)_{x - c}: rolling right by c.  Zero dot product <=> #E = p + 1.
    for c in range(1, (p - 1) // 2 + 1):
        if int(np.dot(np.roll(v0, c), wd)) == 0:
            model = twotor(2 * c, c * c - d, F)
            return SearchOutcome(model, j_invariant(model))
    raise AssertionError(f"no supersingular curve found over F_{p}")
