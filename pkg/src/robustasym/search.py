"""Robustness profiles: the normalized distance delta(k) per support size.

For a graph with ``n`` vertices and ``m`` edges and a k-permutation ``pi``
the normalized distance is ``dist_perm(G, pi) * n / (k * m)``.  The profile
records its minimum over k-permutations for each ``k`` in ``2..n``; the
graph is delta-asymmetric exactly when every entry is at least delta.

Exact entries come from exhaustive enumeration (with branch and bound) and
certify; heuristic entries come from simulated annealing and can only
refute.
"""

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from ._validation import check_int, check_k, check_rational
from .exceptions import BudgetExceededError, DomainError, FingerprintMismatchError, NormalizationError
from .permutations import Permutation, _sample_moved, count_k_perms
from .rng import make_rng

__all__ = [
    "DEFAULT_BUDGET",
    "SearchParams",
    "DeltaEntry",
    "AsymmetryProfile",
    "Verdict",
    "TranspositionStats",
    "exact_delta_k",
    "exact_delta_2",
    "transposition_stats",
    "heuristic_delta_k",
    "exact_profile",
    "is_delta_asymmetric",
    "has_nontrivial_automorphism",
]

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class SearchParams:
    """Annealing schedule shared by every restart."""

    restarts: int = 32
    steps: int = 20_000
    cooling: float = 0.999
    probe_steps: int = 100
    seed: int = 0

    def __post_init__(self):
        check_int(self.restarts, "restarts", minimum=1)
        check_int(self.steps, "steps", minimum=0)
        check_int(self.probe_steps, "probe_steps", minimum=0)
        check_int(self.seed, "seed", minimum=0)
        if not 0.0 < float(self.cooling) <= 1.0:
            raise DomainError(f"cooling must lie in (0, 1], got {self.cooling}")


@dataclass(frozen=True)
class DeltaEntry:
    k: int
    delta: Fraction
    dist: int
    witness: Permutation
    exact: bool


class Verdict(enum.Enum):
    CERTIFIED = "true"
    REFUTED = "false"
    NOT_REFUTED = "not-refuted"


@dataclass
class AsymmetryProfile:
    n: int
    m: int
    graph_hash: str
    entries: dict = field(default_factory=dict)

    @property
    def overall(self):
        """Minimum delta over the entries, or ``None`` for an empty profile."""
        if not self.entries:
            return None
        return min(e.delta for e in self.entries.values())

    @property
    def complete(self):
        return set(self.entries) == set(range(2, self.n + 1))

    @property
    def certified(self):
        return self.complete and all(e.exact for e in self.entries.values())

    def to_dict(self):
        overall = self.overall
        return {
            "n": self.n,
            "m": self.m,
            "graph_hash": self.graph_hash,
            "entries": [
                {
                    "k": e.k,
                    "delta_num": e.delta.numerator,
                    "delta_den": e.delta.denominator,
                    "dist": e.dist,
                    "witness_cycles": str(e.witness),
                    "exact": e.exact,
                }
                for _, e in sorted(self.entries.items())
            ],
            "overall": None
            if overall is None
            else {"delta_num": overall.numerator, "delta_den": overall.denominator},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc):
        n = doc["n"]
        entries = {}
        for row in doc["entries"]:
            entries[row["k"]] = DeltaEntry(
                k=row["k"],
                delta=Fraction(row["delta_num"], row["delta_den"]),
                dist=row["dist"],
                witness=Permutation.parse(row["witness_cycles"], n),
                exact=row["exact"],
            )
        return cls(n=n, m=doc["m"], graph_hash=doc["graph_hash"], entries=entries)


def _check_normalizable(G):
    if G.n < 2:
        raise NormalizationError("delta is undefined for a graph with one vertex")
    if G.m == 0:
        raise NormalizationError("delta is undefined for a graph with no edges")


def _entry(G, k, lost, moved, images, exact):
    mapping = list(range(G.n))
    for src, dst in zip(moved, images):
        mapping[int(src)] = int(dst)
    witness = Permutation._trusted(mapping, [int(v) for v in moved])
    return DeltaEntry(k, Fraction(int(lost) * G.n, k * G.m), int(lost), witness, exact)


def exact_delta_k(G, k, budget=DEFAULT_BUDGET):
    """Exact delta(k): the minimum over every k-permutation.

    Raises :class:`BudgetExceededError` (carrying the exact count) when the
    number of k-permutations exceeds ``budget``.  Ties go to the first
    minimizer in enumeration order.
    """
    _check_normalizable(G)
    k = check_k(k, G.n)
    count = count_k_perms(G.n, k)
    if count > budget:
        raise BudgetExceededError(count, budget, k)
    rows, dense, indptr, indices = G.kernel_arrays()
    lost, moved, images = _kernels.exact_min(rows, dense, indptr, indices, G.n, k, G.m + 1)
    return _entry(G, k, lost, moved, images, exact=True)


@dataclass(frozen=True)
class TranspositionStats:
    min_dist: int
    pair: tuple
    total_dist: int
    count: int

    def mean_normalized(self, n, m):
        """Mean of ``dist * n / (2 m)`` over all transpositions."""
        return Fraction(self.total_dist * n, self.count * 2 * m)


def transposition_stats(G, block_cells=1 << 22):
    """Distances of all transpositions via ``deg u + deg v - 2 c(u, v) - 2 [uv]``.

    ``c(u, v)`` is the common-neighbor count, read off a sparse product of
    the adjacency matrix with itself, one block of rows at a time.
    """
    n = G.n
    if n < 2:
        raise DomainError("transpositions need at least two vertices")
    A = G.sparse_adjacency(np.int64)
    deg = G.degrees
    rows_per_block = max(1, block_cells // n)
    best = None
    pair = None
    total = 0
    cols = np.arange(n)
    for r0 in range(0, n, rows_per_block):
        r1 = min(n, r0 + rows_per_block)
        block = A[r0:r1]
        common = (block @ A).toarray()
        dist = deg[r0:r1, None] + deg[None, :] - 2 * common - 2 * block.toarray()
        upper = cols[None, :] > np.arange(r0, r1)[:, None]
        total += int(dist[upper].sum())
        if not upper.any():
            continue
        masked = np.where(upper, dist, np.iinfo(np.int64).max)
        flat = int(np.argmin(masked))
        value = int(masked.flat[flat])
        if best is None or value < best:
            best = value
            pair = (r0 + flat // n, flat % n)
    return TranspositionStats(best, pair, total, n * (n - 1) // 2)


def exact_delta_2(G):
    """delta(2) from the closed-form distance of every transposition."""
    _check_normalizable(G)
    stats = transposition_stats(G)
    u, v = stats.pair
    return _entry(G, 2, stats.min_dist, [u, v], [v, u], exact=True)


def heuristic_delta_k(G, k, search=None):
    """Upper bound on delta(k) from multi-restart simulated annealing.

    Restart ``r`` draws its start permutation and all of its moves from the
    substream ``(search.seed, "anneal-k<k>", r)``; the best result over the
    restarts wins, earliest restart first on ties.
    """
    _check_normalizable(G)
    k = check_k(k, G.n)
    search = search or SearchParams()
    rows, dense, indptr, indices = G.kernel_arrays()
    best = None
    for r in range(search.restarts):
        rng = make_rng(search.seed, f"anneal-k{k}", r)
        moved, images = _sample_moved(G.n, k, rng)
        init = np.arange(G.n, dtype=np.int64)
        init[moved] = images
        uniforms = rng.random((search.probe_steps + search.steps, 5))
        lost, mapping, _ = _kernels.anneal(
            rows, dense, indptr, indices, G.n, init, k,
            search.probe_steps, search.steps, float(search.cooling), uniforms,
        )
        if best is None or lost < best[0]:
            best = (int(lost), mapping)
            if lost == 0:
                break
    lost, mapping = best
    moved = np.flatnonzero(mapping != np.arange(G.n))
    return _entry(G, k, lost, moved, mapping[moved], exact=False)


def exact_profile(G, budget=DEFAULT_BUDGET, search=None, ks=None):
    """Profile over ``ks`` (default ``2..n``).

    Each k whose permutation count fits ``budget`` is enumerated exactly;
    the others get a heuristic entry.  There is no k = 1 entry since no
    permutation moves exactly one vertex.
    """
    _check_normalizable(G)
    ks = range(2, G.n + 1) if ks is None else sorted({check_k(k, G.n) for k in ks})
    entries = {}
    for k in ks:
        if count_k_perms(G.n, k) <= budget:
            entries[k] = exact_delta_k(G, k, budget)
        else:
            entries[k] = heuristic_delta_k(G, k, search)
    return AsymmetryProfile(G.n, G.m, G.fingerprint, entries)


def is_delta_asymmetric(G, delta, profile):
    """Verdict on delta-asymmetry from a profile of ``G``.

    Any entry below ``delta`` refutes, exact or not.  Otherwise the verdict
    is certified only for a complete profile of exact entries.
    """
    if profile.graph_hash != G.fingerprint or profile.n != G.n or profile.m != G.m:
        raise FingerprintMismatchError("profile was computed for a different graph")
    delta = check_rational(delta)
    if any(e.delta < delta for e in profile.entries.values()):
        return Verdict.REFUTED
    if profile.certified:
        return Verdict.CERTIFIED
    return Verdict.NOT_REFUTED


def has_nontrivial_automorphism(G, budget=DEFAULT_BUDGET):
    """A non-identity automorphism of ``G`` or ``None``.

    Support sizes are tried in ascending order and the search stops at the
    first permutation that loses no edge.
    """
    n = G.n
    rows, dense, indptr, indices = G.kernel_arrays()
    for k in range(2, n + 1):
        count = count_k_perms(n, k)
        if count > budget:
            raise BudgetExceededError(count, budget, k)
        lost, moved, images = _kernels.exact_min(rows, dense, indptr, indices, n, k, 1)
        if lost == 0:
            mapping = list(range(n))
            for src, dst in zip(moved.tolist(), images.tolist()):
                mapping[src] = dst
            return Permutation._trusted(mapping, moved.tolist())
    return None


def rational_str(q):
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def approx(q, digits=6):
    return round(q.numerator / q.denominator, digits) if q is not None else math.nan
