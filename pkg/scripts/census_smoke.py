"""Frobenius census over every prime 5 <= ell < 256.

For each ell prints: ell, number of discriminant families, sum of c_ell, and
whether the census class numbers agree with counting reduced forms.
Exits nonzero on the first disagreement.
"""
import sys

from sympy import primerange

from ssgraph.classpoly import class_number
from ssgraph.tracecalc import c_ell_all, class_numbers_from_table, delta_degree


def main(bound=256):
    print("ell,families,c_sum,class_numbers_ok")
    for ell in primerange(5, bound):
        c = c_ell_all(ell)
        h1 = class_numbers_from_table(ell).h1
        ok = all(h == class_number(-d) for d, h in h1.items())
        print(f"{ell},{len(c)},{sum(c.values())},{ok}")
        if not ok or sum(c.values()) != ell or delta_degree(ell) != 2 * ell:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 256))
