import math

import numpy as np
import pytest

from collapse_gauge import search
from collapse_gauge.core import CollapseParams, Effect, ValidationError
from collapse_gauge.measure import conjecture_bound, lambda_p
from collapse_gauge.sampling import random_effect


@pytest.mark.parametrize("strategy", [s.value for s in search.Strategy])
def test_each_strategy_reaches_uniform_value(strategy):
    rep = search.maximize_lambda(3, 0.5, 3000, strategy, seed=1)
    assert rep.best_lambda >= conjecture_bound(3) - 1e-9
    assert rep.evaluations == 3000
    assert not rep.violated_conjecture


def test_report_is_self_consistent():
    rep = search.maximize_lambda(4, 0.3, 500, "spectrum_parametrized", seed=2)
    assert math.isclose(lambda_p(rep.best_effect, CollapseParams(0.3, 4)).value, rep.best_lambda, abs_tol=1e-9)
    doc = rep.to_dict()
    assert doc["strategy"] == "spectrum_parametrized" and doc["d"] == 4


def test_search_is_deterministic():
    a = search.maximize_lambda(3, 0.4, 1500, "rank_k_projectors", seed=5)
    b = search.maximize_lambda(3, 0.4, 1500, "rank_k_projectors", seed=5)
    assert a.best_lambda == b.best_lambda
    assert np.array_equal(a.best_effect.matrix, b.best_effect.matrix)


def test_larger_budget_never_worse():
    small = search.maximize_lambda(4, 0.45, 1024, "spectrum_parametrized", seed=3)
    big = search.maximize_lambda(4, 0.45, 4096, "spectrum_parametrized", seed=3)
    assert big.best_lambda >= small.best_lambda


def test_report_rejects_inconsistent_value():
    e = search.uniform_projector_effect(3)
    with pytest.raises(ArithmeticError):
        search.SearchReport(e, 0.9, 0.5, 3, 1, search.Strategy.UNIFORM_PROJECTOR)


def test_bad_arguments():
    with pytest.raises(ValidationError):
        search.maximize_lambda(3, 0.5, 10, "annealing")
    with pytest.raises(ValidationError):
        search.maximize_lambda(3, 1.0, 10)
    with pytest.raises(ValidationError):
        search.maximize_lambda(3, 0.5, 0)


def test_lambda_batch_matches_scalar(rng):
    effects = np.stack([random_effect(rng, 4, "mixed").matrix for _ in range(30)])
    for p in (0.2, 0.5, 0.8):
        batch = search.lambda_batch(effects, p)
        for e, v in zip(effects, batch):
            assert math.isclose(v, lambda_p(Effect(e), CollapseParams(p, 4)).value, abs_tol=1e-12)


def test_p_sweep_and_unimodality(rng):
    grid = np.round(np.arange(0.025, 0.976, 0.025), 10)
    for _ in range(10):
        sweep = search.p_sweep(random_effect(rng, 3, "mixed"), grid)
        assert search.is_unimodal(sweep)


def test_is_unimodal_detects_dip():
    assert not search.is_unimodal([(0.1, 0.3), (0.3, 0.2), (0.5, 0.4)])
    assert not search.is_unimodal([(0.6, 0.3), (0.8, 0.4)])


def test_p_sweep_validation():
    with pytest.raises(ValidationError):
        search.p_sweep(np.eye(2), [0.5, 0.3])
    with pytest.raises(ValidationError):
        search.p_sweep(np.eye(2), [0.0, 0.3])
