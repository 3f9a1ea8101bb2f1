"""Permutations of vertex labels and enumeration of k-permutations.

A k-permutation moves exactly ``k`` labels and fixes the other ``n - k``;
its restriction to the moved set is a derangement of that set.  Since no
permutation moves exactly one label, ``k == 1`` never occurs.
"""

import itertools
import math
import re
from functools import lru_cache

import numpy as np

from ._validation import check_int, check_k
from .exceptions import DimensionError, DomainError
from .rng import make_rng

__all__ = [
    "Permutation",
    "support",
    "pair_fixpoints",
    "derangement_count",
    "count_k_perms",
    "enumerate_k_perms",
    "sample_k_perm",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """Immutable bijection on ``range(n)``.

    ``mapping[v]`` is the image of ``v``.  Composition follows function
    notation: ``(a @ b)(v) == a(b(v))``.
    """

    __slots__ = ("_mapping", "_support")

    def __init__(self, mapping):
        mapping = tuple(int(x) for x in mapping)
        n = len(mapping)
        if sorted(mapping) != list(range(n)):
            raise DomainError(f"not a bijection on range({n}): {mapping!r}")
        self._mapping = mapping
        self._support = None

    @classmethod
    def _trusted(cls, mapping, moved=None):
        obj = cls.__new__(cls)
        obj._mapping = tuple(mapping)
        obj._support = None if moved is None else frozenset(moved)
        return obj

    @classmethod
    def identity(cls, n):
        return cls._trusted(range(check_int(n, "n", minimum=0)), ())

    @classmethod
    def transposition(cls, n, a, b):
        if a == b:
            raise DomainError("a transposition needs two distinct labels")
        return cls.from_cycles(n, [(a, b)])

    @classmethod
    def from_cycles(cls, n, cycles):
        mapping = list(range(n))
        seen = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if not 0 <= x < n:
                    raise DomainError(f"label {x} outside [0, {n})")
                if x in seen:
                    raise DomainError(f"label {x} appears in two cycles")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                mapping[a] = b
        return cls._trusted(mapping)

    @classmethod
    def parse(cls, text, n):
        """Parse cycle notation such as ``"(0 3)(1 4 2)"``; ``"()"`` is the identity."""
        text = text.strip()
        if _CYCLE_RE.sub("", text).strip():
            raise DomainError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            parts = body.replace(",", " ").split()
            if not parts:
                continue
            try:
                cycles.append([int(x) for x in parts])
            except ValueError as exc:
                raise DomainError(f"malformed cycle notation: {text!r}") from exc
        return cls.from_cycles(n, cycles)

    @property
    def n(self):
        return len(self._mapping)

    @property
    def mapping(self):
        return self._mapping

    @property
    def support(self):
        if self._support is None:
            self._support = frozenset(v for v, w in enumerate(self._mapping) if v != w)
        return self._support

    @property
    def k(self):
        return len(self.support)

    def __call__(self, v):
        return self._mapping[v]

    def __len__(self):
        return len(self._mapping)

    def inverse(self):
        inv = [0] * self.n
        for v, w in enumerate(self._mapping):
            inv[w] = v
        return Permutation._trusted(inv, self._support)

    def __matmul__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"cannot compose permutations of {self.n} and {other.n}")
        mine = self._mapping
        return Permutation._trusted(mine[w] for w in other._mapping)

    compose = __matmul__

    def cycles(self):
        """Non-trivial cycles, each starting at its smallest label, sorted."""
        seen = set()
        out = []
        for start in sorted(self.support):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            v = self._mapping[start]
            while v != start:
                cyc.append(v)
                seen.add(v)
                v = self._mapping[v]
            out.append(tuple(cyc))
        return out

    def as_array(self):
        return np.asarray(self._mapping, dtype=np.int64)

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self):
        return f"Permutation.parse({str(self)!r}, n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._mapping == other._mapping

    def __hash__(self):
        return hash(self._mapping)


def support(pi):
    """Labels moved by ``pi``."""
    return pi.support


def pair_fixpoints(pi):
    """Number of unordered pairs {u, v} swapped by ``pi`` (its 2-cycles)."""
    mapping = pi.mapping
    return sum(1 for u in pi.support if u < mapping[u] and mapping[mapping[u]] == u)


@lru_cache(maxsize=None)
def derangement_count(k):
    k = check_int(k, "k", minimum=0)
    a, b = 1, 0  # D(0), D(1)
    if k == 0:
        return a
    for i in range(2, k + 1):
        a, b = b, (i - 1) * (a + b)
    return b


def count_k_perms(n, k):
    """Exact number of permutations of ``range(n)`` moving exactly ``k`` labels."""
    n = check_int(n, "n", minimum=0)
    k = check_k(k, n, allow_small=True)
    return math.comb(n, k) * derangement_count(k)


def _derangements(k):
    """Derangements of ``range(k)`` as image tuples, in lexicographic order.

    Placement runs left to right; the only dead end for a partial
    assignment is the last position being left with its own label, so
    position ``k - 2`` is forced to take ``k - 1`` whenever it is free.
    """
    if k == 0:
        yield ()
        return
    if k == 1:
        return
    images = [0] * k
    used = [False] * k

    def place(i):
        if i == k:
            yield tuple(images)
            return
        if i == k - 2 and not used[k - 1]:
            candidates = (k - 1,)
        else:
            candidates = range(k)
        for x in candidates:
            if used[x] or x == i:
                continue
            used[x] = True
            images[i] = x
            yield from place(i + 1)
            used[x] = False

    yield from place(0)


@lru_cache(maxsize=16)
def derangement_table(k):
    """All derangements of ``range(k)`` stacked as a read-only int64 array."""
    table = np.array(list(_derangements(k)), dtype=np.int64).reshape(-1, k)
    table.setflags(write=False)
    return table


def enumerate_k_perms(n, k):
    """Yield every k-permutation of ``range(n)`` exactly once.

    Moved sets come in lexicographic order and, within a moved set,
    derangements in lexicographic order of the image sequence.  ``k == 1``
    yields nothing.
    """
    n = check_int(n, "n", minimum=0)
    k = check_k(k, n, allow_small=True)
    if k == 1:
        return
    patterns = list(_derangements(k))
    for subset in itertools.combinations(range(n), k):
        for pat in patterns:
            mapping = list(range(n))
            for pos, src in enumerate(subset):
                mapping[src] = subset[pat[pos]]
            yield Permutation._trusted(mapping, subset)


def _sample_moved(n, k, rng):
    """Uniform moved set (sorted) and the images of its members."""
    subset = np.sort(rng.choice(n, size=k, replace=False))
    positions = np.arange(k)
    while True:
        order = rng.permutation(k)
        if not np.any(order == positions):
            return subset, subset[order]


def sample_k_perm(n, k, rng):
    """Uniformly random k-permutation of ``range(n)``.

    ``rng`` is a ``numpy.random.Generator`` or an integer seed.  The moved
    set is a uniform k-subset and its derangement is drawn by rejecting
    uniform permutations with a fixed point.
    """
    n = check_int(n, "n", minimum=0)
    k = check_k(k, n)
    if not isinstance(rng, np.random.Generator):
        rng = make_rng(check_int(rng, "seed"), "sample_k_perm")
    subset, images = _sample_moved(n, k, rng)
    mapping = list(range(n))
    for src, dst in zip(subset.tolist(), images.tolist()):
        mapping[src] = dst
    return Permutation._trusted(mapping, subset.tolist())
