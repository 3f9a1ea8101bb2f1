"""Seeded samplers for G(n, p) and the minimum-degree repaired G(n, p, d).

Both samplers are pure functions of their parameter objects.  The G(n, p)
phase draws one uniform per vertex pair, pairs in lexicographic order, from
the substream ``(seed, "gnp")``.  The repair pass of G(n, p, d) reads
from the separate substream ``(seed, "aux")``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_int, check_probability
from .exceptions import DomainError
from .graph import DENSE_LIMIT, Graph
from .rng import make_rng

__all__ = ["GnpParams", "GnpdParams", "default_degree", "gen_gnp", "gen_gnpd"]

# uniforms drawn per block in the G(n, p) phase
_BLOCK = 1 << 20


def default_degree(n, p):
    """``ceil(p (n - 1))`` with ``p`` read as the decimal it was written as."""
    p = check_probability(p)
    return math.ceil(Fraction(repr(p)) * (n - 1))


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n", check_int(self.n, "n", minimum=1))
        object.__setattr__(self, "p", check_probability(self.p))
        object.__setattr__(self, "seed", check_int(self.seed, "seed", minimum=0))


@dataclass(frozen=True)
class GnpdParams:
    n: int
    p: float
    d: int
    seed: int = 0

    def __post_init__(self):
        n = check_int(self.n, "n", minimum=2)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", check_probability(self.p))
        object.__setattr__(self, "d", check_int(self.d, "d", minimum=1, maximum=n - 1))
        object.__setattr__(self, "seed", check_int(self.seed, "seed", minimum=0))

    @classmethod
    def from_p(cls, n, p, seed=0):
        d = default_degree(n, p)
        if d < 1:
            raise DomainError(f"ceil(p (n - 1)) = {d}; pass d explicitly")
        return cls(n, p, d, seed)


def _gnp_edges(n, p, seed):
    """(m, 2) edge array of a G(n, p) sample, rows in lexicographic order."""
    rng = make_rng(seed, "gnp")
    found = []
    u = 0
    while u < n - 1:
        # rows u..hi-1 hold sum (n-1-r) pairs; keep a block near _BLOCK draws
        hi = u + 1
        size = n - 1 - u
        while hi < n - 1 and size + (n - 1 - hi) <= _BLOCK:
            size += n - 1 - hi
            hi += 1
        draws = rng.random(size)
        hits = np.flatnonzero(draws < p)
        if hits.size:
            lengths = n - 1 - np.arange(u, hi)
            starts = np.concatenate(([0], np.cumsum(lengths)[:-1]))
            row = np.searchsorted(starts, hits, side="right") - 1
            col = hits - starts[row] + np.arange(u, hi)[row] + 1
            found.append(np.column_stack((row + u, col)))
        u = hi
    if not found:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(found).astype(np.int64)


def gen_gnp(params):
    """Sample G(n, p): every vertex pair is an edge independently with prob. p."""
    return Graph(params.n, _gnp_edges(params.n, params.p, params.seed))


def _repair(n, d, edges, seed):
    """Auxiliary edges raising every vertex to degree >= d, in vertex order.

    Vertex ``i`` owns row ``i`` of an ``n x d`` uniform matrix drawn from
    the ``(seed, "aux")`` stream, so its choice never depends on how much
    randomness other vertices consumed.  Rows are drawn lazily in blocks.
    """
    rng = make_rng(seed, "aux")
    rows_per_block = max(1, _BLOCK // d)
    block = None
    block_start = -rows_per_block
    dense = n <= DENSE_LIMIT
    if dense:
        adj = np.zeros((n, n), dtype=bool)
        adj[edges[:, 0], edges[:, 1]] = True
        adj[edges[:, 1], edges[:, 0]] = True
        adj[np.arange(n), np.arange(n)] = True
        deg = adj.sum(axis=1) - 1
    else:
        nbrs = [set() for _ in range(n)]
        for u, v in edges.tolist():
            nbrs[u].add(v)
            nbrs[v].add(u)
        mark = np.zeros(n, dtype=bool)
    aux = []
    for i in range(n):
        while i >= block_start + rows_per_block:
            block_start += rows_per_block
            block = rng.random((min(rows_per_block, n - block_start), d))
        need = d - (int(deg[i]) if dense else len(nbrs[i]))
        if need <= 0:
            continue
        if dense:
            pool = np.flatnonzero(~adj[i])
        else:
            mark[:] = False
            mark[list(nbrs[i])] = True
            mark[i] = True
            pool = np.flatnonzero(~mark)
        # partial Fisher-Yates: the first `need` slots become a uniform subset
        size = len(pool)
        offsets = np.arange(need)
        picks = offsets + (block[i - block_start, :need] * (size - offsets)).astype(np.int64)
        for j, r in enumerate(picks.tolist()):
            pool[j], pool[r] = pool[r], pool[j]
        chosen = pool[:need]
        if dense:
            adj[i, chosen] = True
            adj[chosen, i] = True
            deg[chosen] += 1
            deg[i] += need
        else:
            for w in chosen.tolist():
                nbrs[i].add(w)
                nbrs[w].add(i)
        aux.extend((i, w) if i < w else (w, i) for w in chosen.tolist())
    return aux


def _gnpd_edges(params):
    base = _gnp_edges(params.n, params.p, params.seed)
    return base, _repair(params.n, params.d, base, params.seed)


def gen_gnpd(params):
    """Sample G(n, p, d).

    Starts from the G(n, p) sample with the same seed, then visits vertices
    in ascending order; a vertex whose current degree (auxiliary edges
    included) is below ``d`` is joined to a uniform subset of its current
    non-neighbors of the missing size.  The returned graph tags those
    auxiliary edges.
    """
    base, aux = _gnpd_edges(params)
    if aux:
        edges = np.concatenate([base, np.asarray(aux, dtype=np.int64)])
    else:
        edges = base
    return Graph(params.n, edges, aux)
