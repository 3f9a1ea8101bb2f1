import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from robustasym.exceptions import DimensionError, DomainError
from robustasym.permutations import (
    Permutation,
    count_k_perms,
    derangement_count,
    derangement_table,
    enumerate_k_perms,
    pair_fixpoints,
    sample_k_perm,
    support,
)
from robustasym.rng import make_rng


def test_construction_and_rendering():
    pi = Permutation.parse("(0 3)(1 4 2)", 6)
    assert pi.mapping == (3, 4, 1, 0, 2, 5)
    assert str(pi) == "(0 3)(1 4 2)"
    assert str(Permutation.identity(4)) == "()"
    assert Permutation.parse("()", 4) == Permutation.identity(4)
    assert Permutation.parse(str(pi), 6) == pi


@pytest.mark.parametrize("text", ["(0 0)", "(0 1)(1 2)", "(0 9)", "0 1", "(a b)"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        Permutation.parse(text, 4)


def test_not_a_bijection():
    with pytest.raises(DomainError):
        Permutation([0, 0, 1])


def test_support_examples():
    assert support(Permutation.identity(5)) == frozenset()
    assert support(Permutation.transposition(5, 0, 1)) == {0, 1}
    assert support(Permutation.parse("(0 1 2)", 4)) == {0, 1, 2}


def test_pair_fixpoints_examples():
    assert pair_fixpoints(Permutation.parse("(0 1)(2 3)", 4)) == 2
    assert pair_fixpoints(Permutation.parse("(0 1 2 3)", 4)) == 0
    assert pair_fixpoints(Permutation.parse("(0 1)(2 3 4)", 6)) == 1


def naive_pair_fixpoints(pi):
    return sum(1 for u, v in itertools.combinations(range(pi.n), 2) if pi(u) == v and pi(v) == u)


@given(st.integers(1, 9).flatmap(lambda n: st.permutations(range(n))))
def test_permutation_algebra(mapping):
    pi = Permutation(mapping)
    assert support(pi @ pi.inverse()) == frozenset()
    assert pi.k != 1
    assert pair_fixpoints(pi) == naive_pair_fixpoints(pi)
    assert pair_fixpoints(pi) <= pi.k // 2
    assert all(pi(v) != v for v in pi.support)
    assert Permutation.parse(str(pi), pi.n) == pi


def test_compose_is_function_notation():
    a = Permutation.parse("(0 1)", 3)
    b = Permutation.parse("(1 2)", 3)
    assert (a @ b)(1) == a(b(1)) == 2
    assert (a @ b)(0) == 1
    with pytest.raises(DimensionError):
        a @ Permutation.identity(4)


def test_derangement_numbers():
    assert [derangement_count(k) for k in range(8)] == [1, 0, 1, 2, 9, 44, 265, 1854]
    for k in range(2, 8):
        assert len(derangement_table(k)) == derangement_count(k)


def test_count_k_perms_examples():
    assert count_k_perms(7, 0) == 1
    assert count_k_perms(7, 1) == 0
    assert count_k_perms(6, 4) == 135
    assert sum(count_k_perms(8, k) for k in range(9)) == math.factorial(8)
    assert count_k_perms(300, 3) == math.comb(300, 3) * 2


def test_enumerate_examples():
    assert [str(p) for p in enumerate_k_perms(3, 2)] == ["(0 1)", "(0 2)", "(1 2)"]
    assert len(list(enumerate_k_perms(4, 3))) == 8
    assert list(enumerate_k_perms(5, 0)) == [Permutation.identity(5)]
    assert list(enumerate_k_perms(5, 1)) == []
    with pytest.raises(DomainError):
        list(enumerate_k_perms(3, 4))


@pytest.mark.parametrize("n", range(0, 8))
def test_enumeration_matches_filter_oracle(n):
    by_k = {}
    for mapping in itertools.permutations(range(n)):
        k = sum(1 for v in range(n) if mapping[v] != v)
        by_k.setdefault(k, set()).add(mapping)
    for k in range(n + 1):
        got = [p.mapping for p in enumerate_k_perms(n, k)]
        assert len(got) == len(set(got)) == count_k_perms(n, k)
        assert set(got) == by_k.get(k, set())


def test_enumeration_order():
    seq = [p for p in enumerate_k_perms(5, 3)]
    keys = [(sorted(p.support), [p(v) for v in sorted(p.support)]) for p in seq]
    assert keys == sorted(keys)


def test_sample_shape_and_errors():
    for seed in range(20):
        pi = sample_k_perm(5, 2, seed)
        assert pi.k == 2 and pair_fixpoints(pi) == 1
    for k in (0, 1, 6):
        with pytest.raises(DomainError):
            sample_k_perm(5, k, 0)


def test_sample_deterministic():
    a = [sample_k_perm(9, 4, make_rng(3, "t")) for _ in range(1)]
    b = [sample_k_perm(9, 4, make_rng(3, "t")) for _ in range(1)]
    assert a == b
    assert sample_k_perm(9, 4, 11) == sample_k_perm(9, 4, 11)


def test_three_cycles_balanced():
    rng = make_rng(0, "three")
    counts = {}
    for _ in range(20000):
        s = str(sample_k_perm(3, 3, rng))
        counts[s] = counts.get(s, 0) + 1
    assert set(counts) == {"(0 1 2)", "(0 2 1)"}
    # 4 sigma of Binomial(20000, 1/2)
    assert abs(counts["(0 1 2)"] - 10000) <= 4 * math.sqrt(5000)


@pytest.mark.parametrize("n, k, outcomes", [(4, 4, 9), (5, 3, 20)])
def test_sampling_uniform_chisquare(n, k, outcomes):
    rng = make_rng(2024, f"chi-{n}-{k}")
    counts = {}
    for _ in range(100_000):
        key = sample_k_perm(n, k, rng).mapping
        counts[key] = counts.get(key, 0) + 1
    assert len(counts) == outcomes == count_k_perms(n, k)
    assert chisquare(list(counts.values())).pvalue > 0.001
