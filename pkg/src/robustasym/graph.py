"""Simple undirected labeled graphs, distances and edge statistics.

Vertices are the integers ``0..n-1`` and edges are stored as sorted pairs
``(u, v)`` with ``u < v``.  A :class:`Graph` is never mutated after
construction; derived arrays are computed lazily and cached.
"""

import hashlib
import io
import os
from collections import namedtuple
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ._validation import check_int, check_same_order, check_vertex_set
from .exceptions import DomainError, EdgeListFormatError

__all__ = [
    "Graph",
    "DegreeStats",
    "dist",
    "dist_perm",
    "apply_perm",
    "covered_edges",
    "induced_edge_count",
    "degree_stats",
    "max_common_neighbors",
    "common_neighbor_witness",
    "format_edge_list",
    "parse_edge_list",
    "read_edge_list",
    "write_edge_list",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "empty_graph",
]

#: Largest order for which adjacency is kept as dense bit rows.
DENSE_LIMIT = 4096

DegreeStats = namedtuple("DegreeStats", ["min", "max", "average"])


def _normalize_edges(n, edges):
    """Validate an edge iterable and return a sorted (m, 2) int64 array."""
    if isinstance(edges, np.ndarray):
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    else:
        arr = np.array([(int(u), int(v)) for u, v in edges], dtype=np.int64).reshape(-1, 2)
    if arr.size:
        if arr.min() < 0 or arr.max() >= n:
            bad = arr[(arr < 0).any(axis=1) | (arr >= n).any(axis=1)][0]
            raise DomainError(f"edge {tuple(bad.tolist())} has a label outside [0, {n})")
        loops = arr[:, 0] == arr[:, 1]
        if loops.any():
            raise DomainError(f"self-loop at vertex {int(arr[loops][0, 0])}")
        arr = np.sort(arr, axis=1)
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        arr = arr[order]
        dup = np.all(arr[1:] == arr[:-1], axis=1)
        if dup.any():
            raise DomainError(f"duplicate edge {tuple(arr[1:][dup][0].tolist())}")
    return arr


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of pairs or (m, 2) array
        Unordered vertex pairs; orientation is irrelevant.
    aux : iterable of pairs, optional
        Subset of ``edges`` tagged as auxiliary (metadata only; it takes no
        part in equality or in the fingerprint).
    """

    def __init__(self, n, edges=(), aux=()):
        self._n = check_int(n, "n", minimum=1)
        self._edge_array = _normalize_edges(self._n, edges)
        self._edge_array.setflags(write=False)
        self._edges = frozenset(map(tuple, self._edge_array.tolist()))
        aux_pairs = frozenset((min(u, v), max(u, v)) for u, v in aux)
        if not aux_pairs <= self._edges:
            raise DomainError("auxiliary edges must be edges of the graph")
        self._aux = aux_pairs

    @property
    def n(self):
        return self._n

    @property
    def m(self):
        return len(self._edges)

    @property
    def edges(self):
        return self._edges

    @property
    def aux_edges(self):
        return self._aux

    @property
    def edge_array(self):
        """Sorted (m, 2) array of edges with ``u < v`` per row."""
        return self._edge_array

    def has_edge(self, u, v):
        return (u, v) in self._edges if u < v else (v, u) in self._edges

    @cached_property
    def _neighbor_sets(self):
        nbrs = [set() for _ in range(self._n)]
        for u, v in self._edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v):
        return self._neighbor_sets[v]

    @cached_property
    def degrees(self):
        deg = np.bincount(self._edge_array.ravel(), minlength=self._n).astype(np.int64)
        deg.setflags(write=False)
        return deg

    @cached_property
    def csr(self):
        """``(indptr, indices)`` with each neighbor list sorted ascending."""
        arr = self._edge_array
        both = np.concatenate([arr, arr[:, ::-1]]) if len(arr) else arr
        order = np.lexsort((both[:, 1], both[:, 0])) if len(both) else np.zeros(0, np.int64)
        both = both[order]
        indptr = np.zeros(self._n + 1, dtype=np.int64)
        np.cumsum(np.bincount(both[:, 0], minlength=self._n), out=indptr[1:])
        indices = np.ascontiguousarray(both[:, 1], dtype=np.int64)
        return indptr, indices

    @cached_property
    def bit_rows(self):
        """Adjacency as packed uint64 rows, or ``None`` above ``DENSE_LIMIT``."""
        if self._n > DENSE_LIMIT:
            return None
        words = (self._n + 63) // 64
        rows = np.zeros((self._n, words), dtype=np.uint64)
        arr = self._edge_array
        for a, b in ((arr[:, 0], arr[:, 1]), (arr[:, 1], arr[:, 0])):
            np.bitwise_or.at(rows, (a, b >> 6), np.left_shift(np.uint64(1), (b & 63).astype(np.uint64)))
        return rows

    def kernel_arrays(self):
        """Arrays consumed by the compiled search kernels."""
        indptr, indices = self.csr
        rows = self.bit_rows
        dense = rows is not None
        if not dense:
            rows = np.zeros((1, 1), dtype=np.uint64)
        return rows, dense, indptr, indices

    def adjacency_matrix(self):
        """Dense boolean adjacency matrix."""
        mat = np.zeros((self._n, self._n), dtype=bool)
        arr = self._edge_array
        mat[arr[:, 0], arr[:, 1]] = True
        mat[arr[:, 1], arr[:, 0]] = True
        return mat

    def sparse_adjacency(self, dtype=np.int64):
        arr = self._edge_array
        rows = np.concatenate([arr[:, 0], arr[:, 1]])
        cols = np.concatenate([arr[:, 1], arr[:, 0]])
        data = np.ones(len(rows), dtype=dtype)
        return sp.csr_matrix((data, (rows, cols)), shape=(self._n, self._n))

    @cached_property
    def fingerprint(self):
        """SHA-256 of the canonical edge list (auxiliary tags excluded)."""
        return hashlib.sha256(format_edge_list(self).encode()).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"


def _image_edges(G, mapping):
    out = set()
    for u, v in G.edges:
        a, b = mapping[u], mapping[v]
        out.add((a, b) if a < b else (b, a))
    return out


def dist(G, H):
    """Half the Hamming distance between the adjacency matrices of G and H.

    Equal to ``|E(G) ^ E(H)| / 2``; an integer whenever ``G.m == H.m``.
    """
    check_same_order(G.n, H.n)
    return Fraction(len(G.edges ^ H.edges), 2)


def dist_perm(G, pi):
    """Number of edges of ``G`` that ``pi`` maps to non-edges.

    Only edges with an endpoint in the support of ``pi`` can move, so the
    count runs over those.
    """
    check_same_order(G.n, pi.n)
    mapping = pi.mapping
    moved = pi.support
    edges = G.edges
    lost = 0
    seen = set()
    for u in moved:
        for v in G.neighbors(u):
            e = (u, v) if u < v else (v, u)
            if e in seen:
                continue
            seen.add(e)
            a, b = mapping[u], mapping[v]
            if ((a, b) if a < b else (b, a)) not in edges:
                lost += 1
    return lost


def apply_perm(G, pi):
    """The relabeled graph ``G_pi`` with edges ``{pi(u), pi(v)}``."""
    check_same_order(G.n, pi.n)
    mapping = pi.mapping
    edges = _image_edges(G, mapping)
    aux = [(mapping[u], mapping[v]) for u, v in G.aux_edges]
    return Graph(G.n, sorted(edges), aux)


def covered_edges(G, S):
    """Edges with at least one endpoint in ``S`` (the count ``m_S``)."""
    S = check_vertex_set(S, G.n)
    return sum(1 for u, v in G.edges if u in S or v in S)


def induced_edge_count(G, S):
    """Edges with both endpoints in ``S``."""
    S = check_vertex_set(S, G.n)
    if len(S) < 2:
        return 0
    return sum(len(G.neighbors(u) & S) for u in S) // 2


def degree_stats(G):
    """``(min, max, average)`` degree; the average is the exact ``2m/n``."""
    deg = G.degrees
    return DegreeStats(int(deg.min()), int(deg.max()), Fraction(2 * G.m, G.n))


def _two_path_codes(G):
    """Pair codes ``u * n + v`` (u < v), one per path u-w-v."""
    indptr, indices = G.csr
    n = G.n
    chunks = []
    tri_cache = {}
    for w in range(n):
        lo, hi = indptr[w], indptr[w + 1]
        deg = hi - lo
        if deg < 2:
            continue
        if deg not in tri_cache:
            tri_cache[deg] = np.triu_indices(deg, 1)
        iu, ju = tri_cache[deg]
        nb = indices[lo:hi]  # sorted, so nb[iu] < nb[ju]
        chunks.append(nb[iu] * n + nb[ju])
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(chunks)


def common_neighbor_witness(G):
    """``(count, (u, v))`` for a pair with the most common neighbors.

    Counts two-paths u-w-v over every middle vertex w, so the cost is
    ``sum_w C(deg(w), 2)``.  Ties go to the smallest pair.
    """
    if G.n < 2:
        raise DomainError("need at least two vertices")
    codes = _two_path_codes(G)
    if codes.size == 0:
        return 0, (0, 1)
    values, counts = np.unique(codes, return_counts=True)
    best = int(np.argmax(counts))
    code = int(values[best])
    return int(counts[best]), (code // G.n, code % G.n)


def max_common_neighbors(G):
    """Largest ``|N(u) & N(v)|`` over unordered pairs of distinct vertices."""
    return common_neighbor_witness(G)[0]


# -- edge-list files ---------------------------------------------------------


def format_edge_list(G, aux=False):
    """Canonical text: ``n m`` header, sorted ``u v`` lines, optional aux block."""
    out = io.StringIO()
    out.write(f"{G.n} {G.m}\n")
    for u, v in G.edge_array.tolist():
        out.write(f"{u} {v}\n")
    if aux:
        for u, v in sorted(G.aux_edges):
            out.write(f"# aux {u} {v}\n")
    return out.getvalue()


def _parse_pair(tokens, lineno, n):
    if len(tokens) != 2:
        raise EdgeListFormatError(lineno, f"expected two labels, got {len(tokens)} fields")
    try:
        u, v = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise EdgeListFormatError(lineno, f"non-integer label in {' '.join(tokens)!r}") from None
    if not (0 <= u < n and 0 <= v < n):
        raise EdgeListFormatError(lineno, f"label out of range [0, {n}): {u} {v}")
    if u == v:
        raise EdgeListFormatError(lineno, f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def parse_edge_list(text):
    """Parse edge-list text into a :class:`Graph`.

    Lines starting with ``#`` are comments, except ``# aux u v`` which tags
    an existing edge as auxiliary.
    """
    lines = text.splitlines()
    if not lines:
        raise EdgeListFormatError(1, "empty input, expected header 'n m'")
    header = lines[0].split()
    try:
        n, m = (int(x) for x in header)
    except ValueError:
        raise EdgeListFormatError(1, f"bad header {lines[0]!r}, expected 'n m'") from None
    if n < 1 or m < 0:
        raise EdgeListFormatError(1, f"bad header values n={n} m={m}")
    seen = {}
    aux = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            tokens = line[1:].split()
            if tokens and tokens[0] == "aux":
                aux.append((lineno, _parse_pair(tokens[1:], lineno, n)))
            continue
        if not line.strip():
            raise EdgeListFormatError(lineno, "blank line")
        pair = _parse_pair(line.split(), lineno, n)
        if pair in seen:
            raise EdgeListFormatError(lineno, f"duplicate edge {pair[0]} {pair[1]} (first on line {seen[pair]})")
        seen[pair] = lineno
        if len(seen) > m:
            raise EdgeListFormatError(lineno, f"more edges than the {m} declared in the header")
    if len(seen) != m:
        raise EdgeListFormatError(len(lines), f"header declares {m} edges, found {len(seen)}")
    for lineno, pair in aux:
        if pair not in seen:
            raise EdgeListFormatError(lineno, f"auxiliary edge {pair[0]} {pair[1]} is not an edge")
    return Graph(n, list(seen), [pair for _, pair in aux])


def read_edge_list(path):
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(G, path, aux=False):
    text = format_edge_list(G, aux=aux)
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- small named graphs ------------------------------------------------------


def empty_graph(n):
    return Graph(n)


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n):
    if n < 3:
        raise DomainError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves):
    """``K_{1,leaves}`` with center 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
