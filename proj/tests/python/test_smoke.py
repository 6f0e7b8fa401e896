import numpy as np
import pytest

import pysing


def test_gaussian_chain_precision():
    theta = np.array([[1.0, -0.45, 0.0], [-0.45, 1.2, -0.5], [0.0, -0.5, 1.0]])
    x, names, edges = pysing.gen_gaussian(theta, 20000, 3)
    assert x.shape == (20000, 3)
    assert edges == [(0, 1), (1, 2)]
    est = pysing.estimate_precision(x, max_degree=1)
    sd = np.sqrt(np.diag(np.linalg.inv(theta)))
    target = np.abs(theta * np.outer(sd, sd))
    assert np.max(np.abs(est["omega"] - target)) < 0.05
    assert est["omega"][0, 2] < 2 * est["rho"][0, 2]


def test_run_sing_on_chain():
    theta = np.eye(4) * 1.5
    for k in range(3):
        theta[k, k + 1] = theta[k + 1, k] = -0.6
    x, _, truth = pysing.gen_gaussian(theta, 4000, 5)
    out = pysing.run_sing(x, max_degree=1, delta=3.0)
    assert out["edges"] == truth
    assert out["trace"][0]["iteration"] == 1
    assert out["omega"].shape == (4, 4)


def test_generators_and_graph_tools():
    x, names, edges = pysing.gen_modified_rademacher(2, 100, 1)
    assert names == ["X1", "Y1", "X2", "Y2"]
    assert edges == [(0, 1), (2, 3)]
    x, names, _ = pysing.gen_stochastic_volatility(4, 50, 2)
    assert x.shape == (50, 6)
    assert pysing.grid_precision(3).shape == (9, 9)
    # star centred on 0 placed first: eliminating the leaves adds nothing
    star = [(0, 1), (0, 2), (0, 3)]
    assert pysing.induced_graph(4, star, [0, 1, 2, 3]) == star
    # centre placed last: its neighbours become a clique
    assert len(pysing.induced_graph(4, star, [1, 2, 3, 0])) == 6
    assert pysing.delta_star(2, 0.05) == pytest.approx(1.959963984540054, abs=1e-10)
    rho = np.array([[0.0, 0.02], [0.02, 0.0]])
    r = pysing.n_star_from_rho(rho, 1000, 0.3, 0.05)
    assert r["argmax"] == (0, 1)


def test_errors_are_translated():
    with pytest.raises(ValueError):
        pysing.run_sing(np.ones((10, 2)))
    with pytest.raises(ValueError):
        pysing.run_sing(np.random.default_rng(0).normal(size=(50, 2)), ordering="bogus")
    with pytest.raises(pysing.NumericalError):
        pysing.estimate_precision(np.random.default_rng(0).normal(size=(5, 4)), max_degree=3)
