import hashlib
import json
from fractions import Fraction

import pytest

from ssgraph.errors import (BadDegree, ChecksumMismatch, CongruenceFailure, CuspInput, MalformedData,
                            NotMonic, UnknownLevel)
from ssgraph.fields import GF, fp2
from ssgraph.modular_data import (BUILTIN_LEVELS, HAUPTMODUL_LEVELS, atkin_from_hauptmodul,
                                  available_levels, classical_modular_poly, delta_by_resultant,
                                  delta_mod, delta_poly, eval_atkin, hauptmodul, hauptmodul_pair,
                                  load_atkin, parse_atkin, validate_atkin)
from ssgraph.poly import ZZ, UniPoly

from oracles import PHI2


def zpoly(*factors):
    out = UniPoly([1], ZZ)
    for roots_or_coeffs, e in factors:
        out = out * UniPoly(list(roots_or_coeffs), ZZ) ** e
    return out


def test_atkin_11_b_is_a_cube():
    R = load_atkin(11)
    assert UniPoly(list(R.b), ZZ) == zpoly(([400, 1120, 1176, 232, 1], 3))


def test_atkin_17_and_19_features():
    assert load_atkin(17).a[0] == 25608112
    a19 = UniPoly(list(load_atkin(19).a), ZZ)
    assert a19(-3) == 0


def test_eval_atkin_examples():
    R = load_atkin(11)
    assert eval_atkin(R, 0) == (16000, 64000000)
    assert eval_atkin(R, 0, GF(7)) == (5, 1)


@pytest.mark.parametrize("ell", BUILTIN_LEVELS)
def test_builtin_degrees_and_monic(ell):
    R = load_atkin(ell)
    assert len(R.a) == ell + 1 and len(R.b) == ell + 2
    assert R.a[-1] == 1 and R.b[-1] == 1


def test_available_levels():
    assert set(BUILTIN_LEVELS) <= set(available_levels())


def test_f2_is_the_textbook_level_two_polynomial_up_to_sign():
    F = classical_modular_poly(2)
    for i in range(4):
        for k in range(4):
            assert F.coeffs[i][k] == -PHI2.get((i, k), 0)


def test_delta_2_and_3():
    x = UniPoly([0, 1], ZZ)
    assert delta_poly(2) == (x - 1728) * (x - 8000) * (x + 3375) ** 2
    assert delta_poly(3) == x * (x - 54000) * (x - 8000) ** 2 * (x + 32768) ** 2


@pytest.mark.parametrize("ell", BUILTIN_LEVELS)
def test_classical_poly_shape(ell):
    F = classical_modular_poly(ell)
    assert F.is_symmetric()
    assert F.degrees() == (ell + 1, ell + 1)
    assert delta_poly(ell).degree() == 2 * ell
    D = delta_poly(ell)
    assert D.lc() == 1
    # the double-root resultant has leading coefficient (-1)^ell
    R = delta_by_resultant(load_atkin(ell))
    assert D == (R if ell % 2 == 0 else -R)


def test_delta_2_mod_7():
    K = GF(7)
    assert delta_mod(2, 7) == UniPoly([1, 1], K) ** 4


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19])
def test_kronecker_congruence(ell):
    K = GF(ell)
    D = delta_mod(ell, ell)
    target = UniPoly([0, -1] + [0] * (ell - 2) + [1], K) ** 2
    assert D.monic() == target
    assert D.lc() != 0


@pytest.mark.parametrize("p,ell", [(37, 3), (61, 5), (29, 7), (101, 3), (13, 3)])
def test_velu_edges_lie_on_classical_polynomial(p, ell):
    from ssgraph.isograph import graph_method

    F = classical_modular_poly(ell)
    K = fp2(p)
    rows = F.reduce(p)
    for (s, d) in graph_method(p, ell).edges:
        val = K.zero
        for i, row in enumerate(rows):
            for k, c in enumerate(row):
                if c:
                    val = val + K(c) * s ** i * d ** k
        assert val == K.zero


def test_hauptmodul_models():
    for ell in HAUPTMODUL_LEVELS:
        m = hauptmodul(ell)
        assert m.n_ell == ell ** (18 // ell)
        assert m.j_den == UniPoly([0, 1], ZZ)
    with pytest.raises(UnknownLevel):
        hauptmodul(11)


def test_hauptmodul_pair_examples():
    j1, _ = hauptmodul_pair(5, 1)
    assert j1 == 4096
    a, b = hauptmodul_pair(5, 7)
    c, d = hauptmodul_pair(5, Fraction(125, 7))
    assert {a, b} == {c, d}
    F = fp2(29)
    r = F.sqrt(F(125))  # a Fricke fixed point
    u, v = hauptmodul_pair(5, r, F)
    assert u == v
    with pytest.raises(CuspInput):
        hauptmodul_pair(5, 0)
    with pytest.raises(CuspInput):
        hauptmodul_pair(7, F(0), F)


@pytest.mark.parametrize("ell", [2, 3, 5, 7, 13])
def test_atkin_data_matches_hauptmodul_derivation(ell):
    R = load_atkin(ell)
    D = atkin_from_hauptmodul(ell)
    assert (D.a, D.b) == (R.a, R.b)


def test_hauptmodul_pair_solves_atkin_quadratic():
    for ell in (3, 5, 7, 13):
        R = load_atkin(ell)
        for t in (1, 2, -3, 5):
            j1, j2 = hauptmodul_pair(ell, t)
            assert list(_candidate_ys(R, j1, j2)), (ell, t)


def _candidate_ys(R, j1, j2):
    """y with a(y) = j1 + j2 and b(y) = j1 j2, searched as roots of a(y) - (j1 + j2)."""
    from sympy import Poly, Rational, Symbol, roots

    y = Symbol("y")
    a = Poly(list(reversed(R.a)), y) - Rational(j1 + j2)
    for r in roots(a, filter="Q"):
        if sum(c * r ** i for i, c in enumerate(R.b)) == j1 * j2:
            yield r


# ingestion error paths


def _write(dirpath, ell, a, b, checksum=True):
    path = dirpath / f"atkin_{ell}.json"
    path.write_text(json.dumps({"ell": ell, "a": [str(c) for c in a], "b": [str(c) for c in b]}))
    if checksum:
        sums = dirpath / "checksums.json"
        table = json.loads(sums.read_text()) if sums.exists() else {}
        table[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
        sums.write_text(json.dumps(table))
    return path


def test_user_supplied_level_loads(tmp_path):
    R = load_atkin(5)
    path = _write(tmp_path, 5, R.a, R.b)
    assert load_atkin(str(path)).a == R.a


def test_bad_degree(tmp_path):
    path = _write(tmp_path, 5, [1, 2, 1], [1, 1, 1, 1, 1, 1, 1])
    with pytest.raises(BadDegree):
        load_atkin(str(path))


def test_not_monic(tmp_path):
    R = load_atkin(5)
    path = _write(tmp_path, 5, R.a[:-1] + (2,), R.b)
    with pytest.raises(NotMonic):
        load_atkin(str(path))


def test_congruence_failure(tmp_path):
    R = load_atkin(5)
    path = _write(tmp_path, 5, (R.a[0] + 1,) + R.a[1:], R.b)
    with pytest.raises(CongruenceFailure):
        load_atkin(str(path))


def test_checksum_mismatch(tmp_path):
    R = load_atkin(5)
    path = _write(tmp_path, 5, R.a, R.b)
    path.write_text(path.read_text() + " ")
    with pytest.raises(ChecksumMismatch):
        load_atkin(str(path))


def test_malformed(tmp_path):
    path = tmp_path / "atkin_5.json"
    path.write_text('{"ell": 5, "a": ["x"]}')
    with pytest.raises(MalformedData):
        load_atkin(str(path))
    with pytest.raises(MalformedData):
        parse_atkin("not json")


def test_unknown_level(tmp_path):
    with pytest.raises(UnknownLevel):
        load_atkin(23, str(tmp_path))
    with pytest.raises(UnknownLevel):
        load_atkin(str(tmp_path / "missing.json"))


def test_data_dir_override_by_environment(tmp_path, monkeypatch):
    R = load_atkin(7)
    _write(tmp_path, 7, R.a, R.b)
    monkeypatch.setenv("SSGRAPH_DATA", str(tmp_path))
    assert load_atkin(7).source.startswith(str(tmp_path))


def test_validate_can_skip_congruence():
    R = load_atkin(5)
    bad = type(R)(5, (R.a[0] + 1,) + R.a[1:], R.b)
    assert validate_atkin(bad, congruence=False) is bad
