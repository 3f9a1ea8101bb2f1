"""Verifiers for the structural and probabilistic claims about the models.

Every check returns a :class:`CheckReport`.  Deterministic checks pass or
fail outright; Monte Carlo checks compare an empirical mean against an
exact closed form within a stated number of standard errors and carry the
sample count, tolerance and seed that produced them.  Closed forms are
evaluated in exact rational arithmetic.
"""

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from ._validation import check_int, check_probability
from .exceptions import DomainError, SearchOverflowError
from .generators import GnpdParams, _gnp_edges, _gnpd_edges
from .graph import common_neighbor_witness, degree_stats
from .permutations import Permutation, _derangements, _sample_moved, pair_fixpoints
from .rng import derive_seed, make_rng
from .search import SearchParams, heuristic_delta_k

__all__ = [
    "CheckReport",
    "DistanceExperiment",
    "check_avg_degree",
    "check_common_neighbors",
    "check_small_set_density",
    "find_dense_set",
    "mc_covered_edges",
    "covered_pairs",
    "lemma1_expectation",
    "lemma1_lower_bound",
    "exhaustive_lemma1_mean",
    "mc_lemma1_expectation",
    "lemma1_sweep",
    "mc_edge_probability",
    "check_small_k_bound",
    "lemma2_status",
]

PASS = "pass"
FAIL = "fail"
STAT_PASS = "statistical-pass"
SKIPPED = "skipped"
INCONCLUSIVE = "inconclusive"

#: verdicts that do not count as failures
OK_VERDICTS = frozenset({PASS, STAT_PASS, SKIPPED, INCONCLUSIVE})


def rational(q):
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


@dataclass
class CheckReport:
    check: str
    verdict: str
    statistics: dict = field(default_factory=dict)
    tolerance: dict = field(default_factory=dict)
    samples: int = None
    seed: int = None
    p_value: float = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.verdict in OK_VERDICTS

    def to_dict(self):
        return {
            "check": self.check,
            "verdict": self.verdict,
            "statistics": self.statistics,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "seed": self.seed,
            "p_value": self.p_value,
            "notes": list(self.notes),
        }


def _two_sided_p(z):
    return math.erfc(abs(z) / math.sqrt(2.0))


def _mean_within(name, mean, expected, se, sigmas, samples, seed, stats):
    """Statistical verdict for ``|mean - expected| <= sigmas * se``."""
    diff = mean - float(expected)
    width = sigmas * se
    if se > 0:
        p_value = _two_sided_p(diff / se)
    else:
        p_value = 1.0 if diff == 0 else 0.0
    verdict = STAT_PASS if abs(diff) <= width else FAIL
    stats = dict(stats, empirical_mean=mean, standard_error=se, difference=diff)
    return CheckReport(
        name,
        verdict,
        stats,
        {"sigmas": sigmas, "half_width": width},
        samples=samples,
        seed=seed,
        p_value=p_value,
    )


# -- degree and neighborhood structure ---------------------------------------


def check_avg_degree(G, p, d=None, slack=5.0):
    """Average degree within ``slack * sqrt(p n)`` of ``p n``."""
    p = check_probability(p)
    stats = degree_stats(G)
    pn = p * G.n
    out = {
        "average_degree": rational(stats.average),
        "min_degree": stats.min,
        "max_degree": stats.max,
        "pn": pn,
    }
    if d is not None:
        out["d"] = d
    if pn == 0:
        return CheckReport("avg_degree", SKIPPED, out, {"slack": slack},
                           notes=["p n = 0: the deviation scale sqrt(p n) is degenerate"])
    width = slack * math.sqrt(pn)
    deviation = abs(float(stats.average) - pn)
    out["deviation"] = deviation
    verdict = PASS if deviation <= width else FAIL
    return CheckReport("avg_degree", verdict, out, {"slack": slack, "half_width": width})


def check_common_neighbors(G, limit=2):
    """Every pair of vertices has at most ``limit`` common neighbors."""
    count, pair = common_neighbor_witness(G)
    stats = {"max_common_neighbors": count}
    if count > limit:
        stats["witness_pair"] = list(pair)
    return CheckReport("common_neighbors", PASS if count <= limit else FAIL, stats, {"limit": limit})


def _triangles(G):
    for a, b in G.edge_array.tolist():
        for c in sorted(G.neighbors(a) & G.neighbors(b)):
            if c > b:
                yield (a, b, c)


def _roots(G, size_limit, ratio):
    """Root sets for the dense-set search, or None when no violator can fit."""
    smallest = 2 * ratio + 2  # least s with C(s, 2) > ratio * s
    if size_limit < smallest:
        return None
    if all(ratio * s + 1 > s * s / 4 for s in range(smallest, size_limit + 1)):
        tri = list(_triangles(G))
        return np.asarray(tri, dtype=np.int64).reshape(len(tri), 3)
    return np.arange(G.n, dtype=np.int64).reshape(G.n, 1)


def find_dense_set(G, size_limit, node_budget=10**6, ratio=3):
    """A vertex set of size <= ``size_limit`` inducing > ``ratio * |S|`` edges.

    Returns ``(violator or None, nodes_visited)``.

    Only inclusion-minimal violators need to be found.  Such a set ``F`` is
    connected, has minimum induced degree > ``ratio``, and each proper subset
    ``T`` has at most ``ratio * |T|`` induced edges.  For a partial set
    ``S`` inside ``F`` that last fact gives
    ``e(S) + e(S, F - S) >= ratio * |S| + 1``, and ``e(S, F - S)`` is at most
    the largest ``size_limit - |S|`` neighbor counts into ``S`` among the
    allowed outside vertices; branches failing either bound are cut.  When
    ``ratio * s + 1 > s * s / 4`` for every admissible size the minimal
    violator holds a triangle (Mantel), and the search grows from triangles
    instead of single vertices.

    Raises :class:`SearchOverflowError` past ``node_budget`` search nodes.
    """
    roots = _roots(G, size_limit, ratio)
    if roots is None or len(roots) == 0:
        return None, 0
    indptr, indices = G.csr
    status, visited, members = _kernels.dense_set_search(
        indptr, indices, G.n, roots, size_limit, ratio, node_budget)
    if status < 0:
        raise SearchOverflowError(f"dense-set search exceeded {node_budget} nodes")
    return (sorted(members.tolist()) if status else None), int(visited)


def _find_dense_set_reference(G, size_limit, node_budget=10**6, ratio=3):
    """Pure-Python twin of :func:`find_dense_set`, kept as a cross-check."""
    nbrs = G._neighbor_sets
    need_deg = ratio + 1
    # smallest s with C(s, 2) > ratio * s
    smallest = 2 * ratio + 2
    if size_limit < smallest:
        return None, 0
    mantel = all(ratio * s + 1 > s * s / 4 for s in range(smallest, size_limit + 1))
    roots = _triangles(G) if mantel else ((v,) for v in range(G.n))
    visited = 0

    def grow(S, eS, X):
        nonlocal visited
        visited += 1
        if visited > node_budget:
            raise SearchOverflowError(f"dense-set search exceeded {node_budget} nodes")
        s = len(S)
        if eS > ratio * s:
            return sorted(S)
        room = size_limit - s
        if room == 0:
            return None
        cnt = Counter(w for u in S for w in nbrs[u] if w not in S and w not in X)
        order = sorted(cnt, key=lambda w: (-cnt[w], w))
        vals = [cnt[w] for w in order]
        for u in S:
            missing = need_deg - len(nbrs[u] & S)
            if missing > room:
                return None
            if missing > 0 and sum(1 for w in nbrs[u] if w not in S and w not in X) < missing:
                return None
        excluded = []
        found = None
        for i, w in enumerate(order):
            # bound with order[:i] excluded; it only shrinks as i grows
            if eS + sum(vals[i:i + room]) < ratio * s + 1:
                break
            S.add(w)
            found = grow(S, eS + cnt[w], X)
            S.discard(w)
            if found:
                break
            X.add(w)
            excluded.append(w)
        for w in excluded:
            X.discard(w)
        return found

    for root in roots:
        S = set(root)
        eS = sum(len(nbrs[u] & S) for u in S) // 2
        hit = grow(S, eS, set())
        if hit:
            return hit, visited
    return None, visited


def check_small_set_density(G, size_limit, node_budget=10**6):
    """No set of at most ``size_limit`` vertices induces more than 3|S| edges."""
    size_limit = check_int(size_limit, "size_limit", minimum=0, maximum=G.n)
    tol = {"size_limit": size_limit, "ratio": 3, "node_budget": node_budget}
    try:
        hit, visited = find_dense_set(G, size_limit, node_budget)
    except SearchOverflowError as exc:
        return CheckReport("small_set_density", INCONCLUSIVE, {}, tol, notes=[str(exc)])
    stats = {"nodes_visited": visited}
    if hit is None:
        return CheckReport("small_set_density", PASS, stats, tol)
    S = frozenset(hit)
    stats["violator"] = hit
    stats["violator_edges"] = sum(len(G.neighbors(u) & S) for u in S) // 2
    return CheckReport("small_set_density", FAIL, stats, tol)


# -- covered edges ---------------------------------------------------------------


def covered_pairs(n, k):
    """Vertex pairs with an endpoint in ``{0..k-1}``, as (u, v) with u < v."""
    return [(u, v) for u in range(n) for v in range(u + 1, n) if u < k]


def _pair_index(n, u, v):
    """Position of pair (u, v), u < v, in lexicographic pair order."""
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def mc_covered_edges(n, p, k, trials=10_000, seed=0, sigmas=4.0):
    """Monte Carlo mean of m_S over G(n, p) for S = {0..k-1}.

    Trial ``t`` samples a full G(n, p) graph with seed
    ``derive_seed(seed, "mc-covered", t)`` and counts its edges covered by
    S.  The mean is compared with ``p (C(k, 2) + k (n - k))``.
    """
    n = check_int(n, "n", minimum=1)
    p = check_probability(p)
    k = check_int(k, "k", minimum=0, maximum=n)
    trials = check_int(trials, "trials", minimum=1)
    size = math.comb(k, 2) + k * (n - k)
    expected = Fraction(repr(p)) * size
    # pairs (u, v) with u < k are exactly the first `size` pairs in lexicographic order
    limit = _pair_index(n, k, k + 1) if k < n - 1 else n * (n - 1) // 2
    values = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        edges = _gnp_edges(n, p, derive_seed(seed, "mc-covered", t))
        if len(edges):
            idx = edges[:, 0] * (2 * n - edges[:, 0] - 1) // 2 + (edges[:, 1] - edges[:, 0] - 1)
            values[t] = int(np.count_nonzero(idx < limit))
        else:
            values[t] = 0
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if trials > 1 else 0.0
    stats = {
        "n": n,
        "k": k,
        "pairs": size,
        "expected_mean": rational(expected),
        "empirical_sd": sd,
        "binomial_sd": math.sqrt(p * (1 - p) * size),
    }
    return _mean_within("covered_edges", mean, expected, sd / math.sqrt(trials), sigmas, trials, seed, stats)


# -- distance under a permutation of a random edge placement ------------------


@dataclass(frozen=True)
class DistanceExperiment:
    """Random placement of ``m_S`` edges among the pairs covered by {0..k-1}."""

    n: int
    k: int
    m_S: int
    trials: int = 10_000

    def __post_init__(self):
        check_int(self.n, "n", minimum=2)
        check_int(self.k, "k", minimum=2, maximum=self.n)
        check_int(self.m_S, "m_S", minimum=0, maximum=self.pairs)
        check_int(self.trials, "trials", minimum=1)

    @property
    def pairs(self):
        return math.comb(self.k, 2) + self.k * (self.n - self.k)


def lemma1_expectation(pairs, m_S, f):
    """Closed form ``m_S (P - f)/P * (P - m_S)/(P - 1)`` as a Fraction.

    A zero numerator short-circuits to 0, which also covers ``P == 1``.
    """
    num = m_S * (pairs - f) * (pairs - m_S)
    if num == 0:
        return Fraction(0)
    return Fraction(num, pairs * (pairs - 1))


def lemma1_lower_bound(n, pairs, m_S):
    """``(n - 2)/(n - 1) * m_S (P - m_S) / P``."""
    return Fraction(n - 2, n - 1) * Fraction(m_S * (pairs - m_S), pairs)


def _pair_map(n, k, pi):
    """Image index of each covered pair under ``pi``."""
    pairs = covered_pairs(n, k)
    index = {pr: i for i, pr in enumerate(pairs)}
    mapping = pi.mapping
    out = np.empty(len(pairs), dtype=np.int64)
    for i, (u, v) in enumerate(pairs):
        a, b = mapping[u], mapping[v]
        out[i] = index[(a, b) if a < b else (b, a)]
    return out


def _check_support(exp, pi):
    if pi.n != exp.n:
        raise DomainError(f"permutation acts on {pi.n} labels, experiment has n={exp.n}")
    if pi.support != frozenset(range(exp.k)):
        raise DomainError("the permutation must move every vertex of S = {0..k-1} and fix the rest")


def _lost_counts(member, sigma):
    """Per row: chosen pairs whose image is not chosen."""
    return np.count_nonzero(member & ~member[:, sigma], axis=1)


def exhaustive_lemma1_mean(exp, pi, chunk_cells=1 << 22):
    """Exact mean of X over every placement of ``m_S`` edges."""
    _check_support(exp, pi)
    sigma = _pair_map(exp.n, exp.k, pi)
    size = len(sigma)
    m_S = exp.m_S
    total = 0
    count = 0
    rows = max(1, chunk_cells // max(1, size))
    combos = itertools.combinations(range(size), m_S)
    while True:
        chunk = list(itertools.islice(combos, rows))
        if not chunk:
            break
        member = np.zeros((len(chunk), size), dtype=bool)
        if m_S:
            idx = np.asarray(chunk, dtype=np.int64)
            member[np.arange(len(chunk))[:, None], idx] = True
        total += int(_lost_counts(member, sigma).sum())
        count += len(chunk)
    return Fraction(total, count)


def mc_lemma1_expectation(exp, pi, seed=0, sigmas=4.0, exact_limit=10**6):
    """Monte Carlo (and, when small enough, exhaustive) check of E[X].

    Each trial places ``m_S`` edges uniformly among the pairs covered by
    S = {0..k-1}, applies ``pi`` and counts placed edges whose image is not
    placed.  The mean is compared with the closed form; when there are at
    most ``exact_limit`` placements the exhaustive mean must equal it
    exactly.
    """
    _check_support(exp, pi)
    size = exp.pairs
    f = pair_fixpoints(pi)
    closed = lemma1_expectation(size, exp.m_S, f)
    sigma = _pair_map(exp.n, exp.k, pi)
    rng = make_rng(seed, "lemma1")
    values = np.empty(exp.trials, dtype=np.int64)
    rows = max(1, (1 << 22) // size)
    for start in range(0, exp.trials, rows):
        stop = min(exp.trials, start + rows)
        keys = rng.random((stop - start, size))
        chosen = np.argsort(keys, axis=1)[:, : exp.m_S]
        member = np.zeros((stop - start, size), dtype=bool)
        member[np.arange(stop - start)[:, None], chosen] = True
        values[start:stop] = _lost_counts(member, sigma)
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if exp.trials > 1 else 0.0
    stats = {
        "n": exp.n,
        "k": exp.k,
        "m_S": exp.m_S,
        "pairs": size,
        "pair_fixpoints": f,
        "closed_form": rational(closed),
        "permutation": str(pi),
    }
    report = _mean_within("lemma1_expectation", mean, closed, sd / math.sqrt(exp.trials),
                          sigmas, exp.trials, seed, stats)
    placements = math.comb(size, exp.m_S)
    if placements <= exact_limit:
        exact = exhaustive_lemma1_mean(exp, pi)
        report.statistics["exhaustive_mean"] = rational(exact)
        report.statistics["placements"] = placements
        if exact != closed:
            report.verdict = FAIL
            report.notes.append("exhaustive mean differs from the closed form")
    return report


def lemma1_sweep(max_pairs=12):
    """Exhaustive agreement of the closed form for every small configuration.

    Covers every (n, k) with ``2 <= k <= n`` and at most ``max_pairs``
    covered pairs, every derangement of S = {0..k-1} and every m_S.  Also
    checks the lower bound ``E[X] >= (n-2)/(n-1) m_S (P - m_S)/P``.
    """
    configs = 0
    mismatches = []
    bound_failures = []
    n = 2
    while math.comb(2, 2) + 2 * (n - 2) <= max_pairs:
        for k in range(2, n + 1):
            size = math.comb(k, 2) + k * (n - k)
            if size > max_pairs:
                continue
            for pattern in _derangements(k):
                pi = Permutation(list(pattern) + list(range(k, n)))
                f = pair_fixpoints(pi)
                for m_S in range(size + 1):
                    exp = DistanceExperiment(n, k, m_S, trials=1)
                    exact = exhaustive_lemma1_mean(exp, pi)
                    closed = lemma1_expectation(size, m_S, f)
                    configs += 1
                    if exact != closed:
                        mismatches.append([n, k, str(pi), m_S, str(exact), str(closed)])
                    if closed < lemma1_lower_bound(n, size, m_S):
                        bound_failures.append([n, k, str(pi), m_S])
        n += 1
    verdict = PASS if not mismatches and not bound_failures else FAIL
    stats = {
        "configurations": configs,
        "mismatches": mismatches[:20],
        "lower_bound_failures": bound_failures[:20],
    }
    return CheckReport("lemma1_sweep", verdict, stats, {"max_pairs": max_pairs, "comparison": "exact"})


# -- conditional edge probability in G(n, p, d) ---------------------------------


def _codes(n, pairs):
    return [min(u, v) * n + max(u, v) for u, v in pairs]


def mc_edge_probability(params, F, e, min_conditional=1000, max_trials=200_000, seed=0, sigmas=4.0):
    """Estimate ``Pr[e in E | F subset of E]`` in G(n, p, d) by rejection.

    Trial ``t`` samples G(n, p, d) with seed ``derive_seed(seed,
    "edge-prob", t)``; trials continue until ``min_conditional`` of them
    contain F or ``max_trials`` is reached (then the verdict is
    inconclusive).  Passes when the estimate lies in
    ``[p - w, p + 2d/(n-1) + w]`` with ``w`` the given number of binomial
    standard errors of the conditional sample.
    """
    n, p, d = params.n, params.p, params.d
    F = [tuple(sorted(map(int, pr))) for pr in F]
    e = tuple(sorted(map(int, e)))
    if e in F:
        raise DomainError("e must not belong to F")
    for u, v in F + [e]:
        if not (0 <= u < v < n):
            raise DomainError(f"pair {(u, v)} is not a vertex pair of an n={n} graph")
    f_codes = np.asarray(_codes(n, F), dtype=np.int64)
    e_code = _codes(n, [e])[0]
    conditional = 0
    hits = 0
    trials = 0
    while conditional < min_conditional and trials < max_trials:
        sample = GnpdParams(n, p, d, derive_seed(seed, "edge-prob", trials))
        base, aux = _gnpd_edges(sample)
        trials += 1
        codes = base[:, 0] * n + base[:, 1]
        if aux:
            extra = np.asarray(aux, dtype=np.int64)
            codes = np.concatenate([codes, extra[:, 0] * n + extra[:, 1]])
        if len(f_codes) and not np.isin(f_codes, codes).all():
            continue
        conditional += 1
        if np.any(codes == e_code):
            hits += 1
    upper = Fraction(repr(p)) + Fraction(2 * d, n - 1)
    stats = {
        "n": n, "p": p, "d": d,
        "F": [list(pr) for pr in F],
        "e": list(e),
        "trials": trials,
        "conditional_samples": conditional,
        "hits": hits,
        "lower": p,
        "upper": rational(upper),
    }
    tol = {"sigmas": sigmas, "min_conditional": min_conditional, "max_trials": max_trials}
    if conditional < min_conditional:
        return CheckReport("edge_probability", INCONCLUSIVE, stats, tol, samples=conditional, seed=seed,
                           notes=["conditioning event too rare within the trial cap"])
    est = hits / conditional
    se = math.sqrt(est * (1 - est) / conditional)
    width = sigmas * se
    stats.update(estimate=est, standard_error=se)
    tol["half_width"] = width
    inside = p - width <= est <= float(upper) + width
    if est < p:
        z = (est - p) / se if se else -math.inf
    elif est > float(upper):
        z = (est - float(upper)) / se if se else math.inf
    else:
        z = 0.0
    return CheckReport("edge_probability", STAT_PASS if inside else FAIL, stats, tol,
                       samples=conditional, seed=seed, p_value=_two_sided_p(z))


# -- small-k distance bound ---------------------------------------------------------


def lemma2_status(G, d, p=None, node_budget=10**6):
    """Reports for the three structural properties used by the small-k bound."""
    out = {}
    if p is not None:
        out["avg_degree"] = check_avg_degree(G, p, d)
    out["common_neighbors"] = check_common_neighbors(G)
    out["small_set_density"] = check_small_set_density(G, G.n // (d * d), node_budget)
    return out


def check_small_k_bound(G, k, d, samples=10_000, seed=0, search=None, lemma2=None, p=None):
    """Sampled check that k-permutations lose at least ``(d - 8) k`` edges.

    Draws ``samples`` uniform k-permutations plus one annealing search and
    counts those losing fewer than ``(d - 8) k`` edges.  The bound is only
    promised when the properties in ``lemma2`` hold; the report records
    whether they do (they are computed here when not supplied).
    """
    k = check_int(k, "k", minimum=2, maximum=G.n)
    d = check_int(d, "d", minimum=1)
    bound = (d - 8) * k
    tol = {"bound": bound, "d": d, "k": k}
    if d <= 8:
        return CheckReport("small_k_bound", PASS, {}, tol, samples=0, seed=seed,
                           notes=["d <= 8: the bound (d - 8) k is vacuous"])
    if lemma2 is None:
        lemma2 = lemma2_status(G, d, p)
    holds = all(r.verdict == PASS for r in lemma2.values() if r.verdict != SKIPPED)
    rng = make_rng(seed, "small-k")
    moved = np.empty((samples, k), dtype=np.int64)
    images = np.empty((samples, k), dtype=np.int64)
    for i in range(samples):
        moved[i], images[i] = _sample_moved(G.n, k, rng)
    rows, dense, indptr, indices = G.kernel_arrays()
    lost = _kernels.lost_edges_batch(rows, dense, indptr, indices, G.n, moved, images)
    entry = heuristic_delta_k(G, k, search or SearchParams(seed=seed))
    violations = int(np.count_nonzero(lost < bound)) + int(entry.dist < bound)
    stats = {
        "sampled_min_dist": int(lost.min()) if samples else None,
        "sampled_mean_dist": float(lost.mean()) if samples else None,
        "heuristic_dist": entry.dist,
        "heuristic_witness": str(entry.witness),
        "violations": violations,
        "lemma2_holds": holds,
        "lemma2": {name: r.verdict for name, r in lemma2.items()},
        "k_within_n_over_d2": k <= G.n / (d * d),
    }
    notes = []
    if not stats["k_within_n_over_d2"]:
        notes.append("k exceeds n / d^2, outside the small-k range")
    return CheckReport("small_k_bound", PASS if violations == 0 else FAIL, stats, tol,
                       samples=samples, seed=seed, notes=notes)
