import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

from robustasym.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def all_perms(n):
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def brute_force_profile(G):
    """{k: (delta, min_dist)} by filtering all n! permutations."""
    n = G.n
    perms = all_perms(n)
    A = G.adjacency_matrix().astype(bool)
    e = G.edge_array
    # an edge u-v is lost when A[pi(u), pi(v)] is 0
    lost = (~A[perms[:, e[:, 0]], perms[:, e[:, 1]]]).sum(axis=1)
    ks = (perms != np.arange(n)).sum(axis=1)
    out = {}
    for k in range(2, n + 1):
        sel = ks == k
        if sel.any():
            d = int(lost[sel].min())
            out[k] = (Fraction(d * n, k * G.m), d)
    return out


def brute_force_automorphic(G):
    """True when some non-identity permutation preserves every edge."""
    n = G.n
    perms = all_perms(n)[1:]
    A = G.adjacency_matrix().astype(bool)
    same = (A[perms[:, :, None], perms[:, None, :]] == A).all(axis=(1, 2))
    return bool(same.any())


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


@pytest.fixture
def c6():
    return Graph(6, [(i, (i + 1) % 6) for i in range(6)])


@pytest.fixture
def asym6():
    """Smallest asymmetric graphs have 6 vertices; this is one of them."""
    return Graph(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (3, 5)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
