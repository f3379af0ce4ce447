"""Tests for the optimizer layer (fast checks; bounds live in acceptance)."""

import numpy as np
import pytest

from nlocality.optimize import (OptimizerConfig, angles_to_observables,
                                default_nlocal_groupings, maximize_local,
                                maximize_trilocal, visibility_threshold)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=0)
    with pytest.raises(ValueError):
        OptimizerConfig(tolerance=0.0)
    with pytest.raises(ValueError):
        OptimizerConfig(max_iterations=-1)


def test_angles_to_observables():
    angles = np.array([0.0, 0.0, np.pi / 2, 0.0,
                       0.0, 0.0, 0.0, 0.0,
                       0.0, 0.0, 0.0, 0.0])
    obs = angles_to_observables(angles)
    assert obs.shape == (3, 2, 2, 2)
    assert np.allclose(obs[0, 0], np.diag([1.0, -1.0]))
    assert np.allclose(obs[0, 1], np.array([[0, 1], [1, 0]]))
    for party in obs:
        for m in party:
            assert np.allclose(m @ m, np.eye(2), atol=1e-12)


def test_optimizer_is_deterministic():
    cfg = OptimizerConfig(restarts=3, seed=7)
    r1 = maximize_trilocal(("gghz", {"alpha": 0.4}), cfg)
    r2 = maximize_trilocal(("gghz", {"alpha": 0.4}), cfg)
    assert r1.score == r2.score
    assert np.array_equal(r1.angles, r2.angles)
    assert r1.evaluations == r2.evaluations


def test_workers_do_not_change_result():
    base = maximize_trilocal(("gghz", {"alpha": 0.4}),
                             OptimizerConfig(restarts=4, seed=3))
    threaded = maximize_trilocal(("gghz", {"alpha": 0.4}),
                                 OptimizerConfig(restarts=4, seed=3,
                                                 workers=4))
    assert base.score == threaded.score


def test_more_restarts_never_worse():
    few = maximize_trilocal(("gghz", {"alpha": 0.6}),
                            OptimizerConfig(restarts=2, seed=11))
    many = maximize_trilocal(("gghz", {"alpha": 0.6}),
                             OptimizerConfig(restarts=8, seed=11))
    assert many.score >= few.score - 1e-12


def test_result_reports_argmax_tuple():
    res = maximize_trilocal(("gghz", {"alpha": 0.7}),
                            OptimizerConfig(restarts=4, seed=0))
    assert res.i_values.shape == (2, 2, 2)
    assert res.tuple_k0 is not None and res.tuple_k1 is not None
    assert res.evaluations > 0


def test_maximize_local_runs():
    res = maximize_local(("gghz", {"alpha": 0.3}),
                         OptimizerConfig(restarts=4, seed=0))
    assert 0.0 <= res.score <= 1.0 + 1e-6


def test_threshold_rejects_unknown_family():
    with pytest.raises(ValueError):
        visibility_threshold("gghz")


def test_default_nlocal_groupings():
    for n in (2, 3, 4):
        pairs = default_nlocal_groupings(n)
        assert len(pairs) == n - 1
        for pair in pairs:
            assert len(pair) == 2
            for g in pair:
                assert g.n == n
