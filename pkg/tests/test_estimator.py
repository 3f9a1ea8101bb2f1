import numpy as np
import pytest
from sklearn.base import clone

from robustasym.estimator import AsymmetryProfiler
from robustasym.graph import complete_graph, cycle_graph
from robustasym.search import exact_delta_2, exact_profile


def test_params_roundtrip():
    est = AsymmetryProfiler(budget=10, restarts=3)
    assert est.get_params()["budget"] == 10
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    twin.set_params(seed=4)
    assert twin.seed == 4 and est.seed == 0


def test_fit_transform(asym6):
    graphs = [asym6, cycle_graph(6), complete_graph(4)]
    est = AsymmetryProfiler()
    X = est.fit_transform(graphs)
    assert X.shape == (3, 2)
    assert len(est.profiles_) == 3
    assert X[0, 0] == float(exact_profile(asym6).overall)
    assert X[1].tolist() == [0.0, float(exact_delta_2(cycle_graph(6)).delta)]
    assert X[2].tolist() == [0.0, 0.0]
    assert list(est.get_feature_names_out()) == ["overall_delta", "delta2"]


def test_transform_unseen_graph_and_single(asym6):
    est = AsymmetryProfiler().fit([asym6])
    row = est.transform(cycle_graph(7))
    assert row.shape == (1, 2) and row[0, 0] == 0.0


def test_unfitted_and_bad_input(asym6):
    with pytest.raises(AttributeError):
        AsymmetryProfiler().transform([asym6])
    with pytest.raises(TypeError):
        AsymmetryProfiler().fit([np.zeros((3, 3))])
