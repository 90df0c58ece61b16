from fractions import Fraction

import pytest

from ssgraph.classpoly import class_number, fundamental_part, hilbert_class_poly, is_fundamental
from ssgraph.errors import (EqualPrimes, GonalityUnknown, MissingClassNumber, NonIntegralSolution,
                            SmallLevel)
from ssgraph.fields import fp2, legendre
from ssgraph.isograph import adjacency_matrix, graph_method, supersingular_set
from ssgraph.mcmethod import mc_method
from ssgraph.modular_data import delta_poly
from ssgraph.poly import ZZ, UniPoly
from ssgraph.tracecalc import (SMALL_LEVEL_TABLES, DegreeLedger, SuppEntry, c_ell, c_ell_all,
                               class_numbers_from_table, delta_degree, delta_from_class_polys,
                               difficulty, epsilon, frobenius_trace_table, h_dm, phi, self_loops_per_vertex,
                               supp, trace_predict, two_vertex_solve)

from oracles import brute_point_count, class_number_brute, genus_x0

LEVELS = [5, 7, 11, 13, 17, 19, 23, 29, 31]


def _census_by_listing(ell):
    """|trace| of y^2 = x^3 + 3t x + 2t, t = j/(1728 - j), for j not in {0, 1728}."""
    out = {}
    for j in range(ell):
        if j in (0, 1728 % ell):
            continue
        t = j * pow(1728 - j, -1, ell) % ell
        n = brute_point_count(ell, 0, 3 * t % ell, 2 * t % ell)
        out[j] = abs(ell + 1 - n)
    return out


@pytest.mark.parametrize("ell,zero", [(11, {0, 1}), (13, {5}), (5, {0})])
def test_trace_zero_examples(ell, zero):
    assert set(frobenius_trace_table(ell).by_trace[0]) == zero


@pytest.mark.parametrize("ell", LEVELS)
def test_census_matches_point_listing(ell):
    table = frobenius_trace_table(ell)
    for j, a in _census_by_listing(ell).items():
        assert j in table.by_trace[a]


def test_census_needs_level_above_three():
    with pytest.raises(SmallLevel):
        frobenius_trace_table(3)


def test_supp_examples():
    assert supp(5) == [SuppEntry(0, 20, 1), SuppEntry(1, 19, 1), SuppEntry(2, 4, 2),
                       SuppEntry(3, 11, 1), SuppEntry(4, 4, 1)]
    s19 = {e.a: (e.disc, e.m) for e in supp(19)}
    assert s19[0] == (-19, 2) and s19[1] == (-3, 5) and s19[8] == (-3, 2)
    with pytest.raises(SmallLevel):
        supp(2)
    assert {d for d, _, _ in SMALL_LEVEL_TABLES[2]} == {-4, -8, -7}


@pytest.mark.parametrize("ell", LEVELS + [37, 41, 43])
def test_supp_entries_are_fundamental(ell):
    for e in supp(ell):
        assert e.a * e.a - 4 * ell == -e.d * e.m * e.m
        assert is_fundamental(-e.d)


def test_h_dm_examples():
    ledger = DegreeLedger(3, {3: 1, 8: 1, 11: 1})
    assert h_dm(3, 2, ledger) == 2
    assert [h_dm(d, 1, ledger) for d in (3, 8, 11)] == [1, 1, 1]
    assert phi(4, 2) == 2
    with pytest.raises(MissingClassNumber):
        h_dm(7, 1, ledger)


def test_class_numbers_from_census():
    assert class_numbers_from_table(5).h1[20] == 2
    assert class_numbers_from_table(13).h1[43] == 1
    assert [r for d, r, _ in SMALL_LEVEL_TABLES[2] if d == -7] == [(-3375,)]


@pytest.mark.parametrize("ell", LEVELS)
def test_census_class_numbers_match_reduced_forms(ell):
    for d, h in class_numbers_from_table(ell).h1.items():
        assert h == class_number(-d) == class_number_brute(-d)


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11, -15, -20, -23, -39, -47, -56, -71, -84, -163, -260])
def test_class_number_two_ways(D):
    assert class_number(D) == class_number_brute(D)


def test_hilbert_class_polys():
    x = UniPoly([0, 1], ZZ)
    assert hilbert_class_poly(-3) == x
    assert hilbert_class_poly(-4) == x - 1728
    assert hilbert_class_poly(-7) == x + 3375
    assert hilbert_class_poly(-8) == x - 8000
    assert hilbert_class_poly(-15) == x * x + 191025 * x - 121287375
    assert hilbert_class_poly(-12) == x - 54000


def test_fundamental_part():
    assert fundamental_part(20) == (20, 1)
    assert fundamental_part(16) == (4, 2)
    assert fundamental_part(75) == (3, 5)


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_delta_degree_and_normalisation(ell):
    assert delta_degree(ell) == 2 * ell
    assert sum(c_ell_all(ell).values()) == ell


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 17, 19])
def test_delta_from_class_polynomials(ell):
    assert delta_from_class_polys(ell) == delta_poly(ell)


def test_c_ell_examples():
    ledger = class_numbers_from_table(5)
    assert c_ell(5, 4) == h_dm(4, 2, ledger)
    for ell in LEVELS:
        for d in c_ell_all(ell):
            if legendre(-d, ell) == -1:
                assert c_ell(ell, d) == 0
        assert c_ell(ell, 5 * ell + 2) == 0


def test_epsilon_examples():
    assert epsilon(11, 5) == 0
    assert epsilon(5, 19) == 4


def test_trace_examples():
    assert trace_predict(7, 2) == 3
    assert trace_predict(11, 2) == 1
    assert trace_predict(13, 5) == 6
    with pytest.raises(EqualPrimes):
        trace_predict(5, 5)


def test_literal_strategy_is_not_integral():
    assert trace_predict(11, 5, "literal") == Fraction(11, 2)
    assert trace_predict(11, 5) == adjacency_matrix(mc_method(11, 5))[1]


def test_self_loop_examples():
    F7, F11, F19 = fp2(7), fp2(11), fp2(19)
    assert self_loops_per_vertex(19, 2) == {F19(7): 2, F19(18): 1}
    assert self_loops_per_vertex(11, 2) == {F11(0): 0, F11(1): 1}
    assert self_loops_per_vertex(7, 2) == {F7(6): 3}


@pytest.mark.parametrize("p,ell", [(37, 5), (37, 13), (61, 7), (5, 19), (73, 11), (97, 3), (101, 17)])
def test_self_loops_match_mc_graph(p, ell):
    assert self_loops_per_vertex(p, ell) == mc_method(p, ell).loops()


def test_two_vertex_examples():
    assert two_vertex_solve(11, 2, trace=1) == (1, [[0, 3], [2, 1]])
    assert two_vertex_solve(19, 2, trace=3) == (1, [[2, 1], [2, 1]])
    with pytest.raises(NonIntegralSolution):
        two_vertex_solve(11, 2, trace=2)


@pytest.mark.parametrize("ell", [2, 3, 5, 7, 11, 13, 19])
def test_two_vertex_17(ell):
    a, M = two_vertex_solve(17, ell)
    assert 0 <= a <= (ell + 1) // 3
    assert M == adjacency_matrix(mc_method(17, ell))[0]


def test_difficulty_examples():
    assert difficulty(13, 7)[2] == 0
    # p = 19 has order 2 mod 5 and p^2 has order 1
    assert difficulty(19, 5)[0] == 1
    assert difficulty(37, 11)[1] == 2
    with pytest.raises(GonalityUnknown):
        difficulty(5, 37)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 97])
def test_tr_difficulty_is_genus(p):
    assert difficulty(p, 2)[2] == genus_x0(p) == len(supersingular_set(p)) - 1


def test_graph_trace_for_a_tower_case():
    G = graph_method(5, 7)      # walks over F_{5^6}
    assert trace_predict(5, 7) == adjacency_matrix(G)[1] == 8
    assert trace_predict(5, 7, "literal") == 5


def test_census_smoke_script_below_256():
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parent.parent / "scripts" / "census_smoke.py"
    out = subprocess.run([sys.executable, str(script)], capture_output=True, text=True)
    assert out.returncode == 0, out.stdout[-500:]
    assert out.stdout.splitlines()[-1].startswith("251,")
