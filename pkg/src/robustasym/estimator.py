"""scikit-learn style wrapper around the profile computation."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .graph import Graph
from .search import DEFAULT_BUDGET, SearchParams, exact_delta_2, exact_profile

__all__ = ["AsymmetryProfiler"]


def _as_graphs(X):
    if isinstance(X, Graph):
        return [X]
    graphs = list(X)
    for G in graphs:
        if not isinstance(G, Graph):
            raise TypeError(f"expected Graph objects, got {type(G).__name__}")
    return graphs


class AsymmetryProfiler(TransformerMixin, BaseEstimator):
    """Maps graphs to ``[overall delta, delta(2)]`` feature rows.

    ``fit`` computes and stores the profiles of the training graphs in
    ``profiles_``; ``transform`` profiles whatever graphs it is given,
    reusing stored profiles for graphs seen during ``fit``.

    Parameters mirror :func:`exact_profile` and :class:`SearchParams`.
    """

    def __init__(self, budget=DEFAULT_BUDGET, restarts=32, steps=20_000, cooling=0.999,
                 probe_steps=100, seed=0):
        self.budget = budget
        self.restarts = restarts
        self.steps = steps
        self.cooling = cooling
        self.probe_steps = probe_steps
        self.seed = seed

    def _search(self):
        return SearchParams(self.restarts, self.steps, self.cooling, self.probe_steps, self.seed)

    def _profile(self, G):
        return exact_profile(G, self.budget, self._search())

    def fit(self, X, y=None):
        self.profiles_ = [self._profile(G) for G in _as_graphs(X)]
        self._by_hash = {p.graph_hash: p for p in self.profiles_}
        return self

    def transform(self, X):
        if not hasattr(self, "profiles_"):
            raise AttributeError("AsymmetryProfiler is not fitted; call fit first")
        rows = []
        for G in _as_graphs(X):
            prof = self._by_hash.get(G.fingerprint) or self._profile(G)
            entry = prof.entries.get(2)
            d2 = entry.delta if entry is not None and entry.exact else exact_delta_2(G).delta
            rows.append([float(prof.overall), float(d2)])
        return np.asarray(rows, dtype=float).reshape(-1, 2)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(["overall_delta", "delta2"], dtype=object)
