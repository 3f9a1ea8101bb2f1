import json
from fractions import Fraction

import numpy as np
import pytest
from conftest import brute_force_automorphic, brute_force_profile, random_graph

from robustasym.exceptions import BudgetExceededError, FingerprintMismatchError, NormalizationError
from robustasym.generators import GnpParams, gen_gnp
from robustasym.graph import Graph, apply_perm, complete_graph, cycle_graph, dist_perm, path_graph, star_graph
from robustasym.permutations import Permutation, count_k_perms, enumerate_k_perms
from robustasym.search import (
    AsymmetryProfile,
    SearchParams,
    Verdict,
    exact_delta_2,
    exact_delta_k,
    exact_profile,
    has_nontrivial_automorphism,
    heuristic_delta_k,
    is_delta_asymmetric,
    transposition_stats,
)

FAST = SearchParams(restarts=8, steps=3000)


def check_witness(G, entry):
    assert entry.witness.k == entry.k
    assert dist_perm(G, entry.witness) == entry.dist
    assert entry.delta == Fraction(entry.dist * G.n, entry.k * G.m)


def test_cycle_rotation(c6):
    e = exact_delta_k(c6, 6)
    assert e.delta == 0 and e.exact
    assert dist_perm(c6, e.witness) == 0
    assert len(e.witness.cycles()) in (1, 2, 3)


def test_star_and_path():
    assert exact_delta_k(star_graph(4), 2).delta == 0
    assert str(exact_delta_k(star_graph(4), 2).witness) == "(1 2)"
    P = path_graph(3)
    e2 = exact_delta_k(P, 2)
    assert e2.delta == 0 and str(e2.witness) == "(0 2)"
    assert exact_delta_k(P, 3).delta == Fraction(1, 2)


def test_triangle_profile():
    prof = exact_profile(complete_graph(3))
    assert set(prof.entries) == {2, 3}
    assert all(e.delta == 0 for e in prof.entries.values())
    assert is_delta_asymmetric(complete_graph(3), Fraction(1, 10), prof) is Verdict.REFUTED


def test_first_minimizer_in_enumeration_order():
    rng = np.random.default_rng(0)
    for _ in range(15):
        G = random_graph(rng, 6, 0.5)
        if G.m == 0:
            continue
        for k in range(2, 7):
            e = exact_delta_k(G, k)
            first = next(p for p in enumerate_k_perms(6, k) if dist_perm(G, p) == e.dist)
            assert e.witness == first


def test_exact_profile_matches_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(25):
        n = int(rng.integers(4, 8))
        G = random_graph(rng, n, 0.5)
        if G.m == 0:
            continue
        oracle = brute_force_profile(G)
        prof = exact_profile(G)
        assert prof.certified
        for k, (delta, d) in oracle.items():
            assert prof.entries[k].delta == delta
            assert prof.entries[k].dist == d
            check_witness(G, prof.entries[k])


def test_normalization_errors():
    with pytest.raises(NormalizationError):
        exact_profile(Graph(4))
    with pytest.raises(NormalizationError):
        exact_delta_k(Graph(1), 2)


def test_budget_refusal_carries_count():
    G = cycle_graph(12)
    with pytest.raises(BudgetExceededError) as err:
        exact_delta_k(G, 6, budget=1000)
    assert err.value.count == count_k_perms(12, 6)
    prof = exact_profile(G, budget=0, search=FAST)
    assert not prof.certified
    assert not any(e.exact for e in prof.entries.values())


def test_delta2_closed_form_examples():
    assert exact_delta_2(complete_graph(6)).delta == 0
    two = Graph(4, [(0, 1), (2, 3)])
    swap = Permutation.transposition(4, 0, 2)
    assert dist_perm(two, swap) == 2
    # normalized distance of this transposition hits the ceiling 2
    assert Fraction(dist_perm(two, swap) * two.n, 2 * two.m) == 2
    assert exact_delta_2(two).delta == 0  # (0 1) is an automorphism


def test_delta2_matches_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(60):
        n = int(rng.integers(2, 11))
        G = random_graph(rng, n, float(rng.uniform(0.1, 0.9)))
        if G.m == 0:
            continue
        a = exact_delta_2(G)
        b = exact_delta_k(G, 2)
        assert (a.delta, a.dist, a.witness) == (b.delta, b.dist, b.witness)
        stats = transposition_stats(G)
        dists = [dist_perm(G, p) for p in enumerate_k_perms(n, 2)]
        assert stats.total_dist == sum(dists)
        assert stats.min_dist == min(dists)


def test_transposition_total_closed_form():
    G = gen_gnp(GnpParams(120, 0.2, 1))
    deg = G.degrees
    expected = (G.n - 1) * 2 * G.m - 2 * int((deg * (deg - 1) // 2).sum()) - 2 * G.m
    assert transposition_stats(G, block_cells=5000).total_dist == expected


def test_heuristic_bounds_exact_and_consistent():
    rng = np.random.default_rng(11)
    agree = total = 0
    for _ in range(50):
        n = int(rng.integers(5, 10))
        G = random_graph(rng, n, 0.5)
        if G.m == 0:
            continue
        for k in range(2, n + 1):
            h = heuristic_delta_k(G, k)
            x = exact_delta_k(G, k)
            check_witness(G, h)
            assert not h.exact
            assert h.delta >= x.delta
            agree += h.delta == x.delta
            total += 1
    assert agree >= 0.8 * total


def test_heuristic_finds_rotation_on_c8():
    e = heuristic_delta_k(cycle_graph(8), 8)
    assert e.delta == 0 and e.witness.k == 8


def test_heuristic_deterministic():
    G = gen_gnp(GnpParams(60, 0.3, 2))
    a = heuristic_delta_k(G, 10, FAST)
    b = heuristic_delta_k(G, 10, FAST)
    assert a == b


def test_heuristic_on_sparse_storage():
    rng = np.random.default_rng(2)
    n = 4300
    edges = {tuple(sorted(map(int, rng.choice(n, 2, replace=False)))) for _ in range(15000)}
    G = Graph(n, edges)
    e = heuristic_delta_k(G, 5, SearchParams(restarts=2, steps=2000))
    check_witness(G, e)


def test_verdicts(asym6):
    prof = exact_profile(asym6)
    assert prof.certified and prof.overall > 0
    assert all(e.delta > 0 for e in prof.entries.values())
    assert 1 not in prof.entries
    assert is_delta_asymmetric(asym6, prof.overall, prof) is Verdict.CERTIFIED
    assert is_delta_asymmetric(asym6, prof.overall + Fraction(1, 100), prof) is Verdict.REFUTED
    partial = AsymmetryProfile(prof.n, prof.m, prof.graph_hash, {2: prof.entries[2]})
    assert is_delta_asymmetric(asym6, Fraction(0), partial) is Verdict.NOT_REFUTED
    with pytest.raises(FingerprintMismatchError):
        is_delta_asymmetric(cycle_graph(6), 0, prof)


def test_heuristic_refutes_without_exactness():
    G = cycle_graph(10)
    prof = exact_profile(G, budget=0, search=FAST)
    assert prof.overall == 0
    assert is_delta_asymmetric(G, Fraction(1, 2), prof) is Verdict.REFUTED


def test_relabeling_equivariance():
    rng = np.random.default_rng(4)
    for _ in range(10):
        G = random_graph(rng, 7, 0.45)
        if G.m == 0:
            continue
        sigma = Permutation(rng.permutation(7))
        a = sorted(e.delta for e in exact_profile(G).entries.values())
        b = sorted(e.delta for e in exact_profile(apply_perm(G, sigma)).entries.values())
        assert a == b


def test_profile_json_roundtrip(asym6):
    prof = exact_profile(asym6)
    doc = json.loads(prof.to_json())
    assert doc["overall"] == {"delta_num": prof.overall.numerator, "delta_den": prof.overall.denominator}
    back = AsymmetryProfile.from_dict(doc)
    assert back.entries == prof.entries and back.graph_hash == prof.graph_hash


def test_automorphism_examples():
    w = has_nontrivial_automorphism(cycle_graph(5))
    assert w is not None and dist_perm(cycle_graph(5), w) == 0
    assert has_nontrivial_automorphism(Graph(2, [(0, 1)])) == Permutation.transposition(2, 0, 1)


def test_automorphism_against_oracle():
    # per-sample agreement is stronger than comparing two fractions within 3%
    hits = 0
    for seed in range(500):
        G = gen_gnp(GnpParams(8, 0.5, seed))
        found = has_nontrivial_automorphism(G)
        assert (found is not None) == brute_force_automorphic(G)
        if found is not None:
            assert found.k >= 2 and dist_perm(G, found) == 0
            hits += 1
    assert 0 < hits < 500
