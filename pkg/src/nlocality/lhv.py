"""Classical reference models: the saturating trilocal model and
exhaustive deterministic-strategy enumeration."""

import itertools

import numpy as np

from .network import (Behavior, TRILOCAL_EXTREMES, TRILOCAL_INTERMEDIATES,
                      local_score, trilocal_score)


def appendix_b_behavior(r):
    """The explicit trilocal model saturating the inequality bound.

    Shared variables lambda_i are point masses at 0; each extreme party
    holds an extra bit tau_i that is 0 with probability r.  Outputs:
    a = tau1 * x, d = tau2 * w, e = tau3 * u, and b = c = 0 regardless of
    settings.  This yields I_{i1,i2,0} = r^3 and I_{j1,j2,1} = (1-r)^3 for
    every index tuple, so the trilocal score is exactly 1 for all r.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    # P(out | setting) for one extreme party: out = tau * setting
    ext = np.zeros((2, 2))
    ext[0, 0] = 1.0
    ext[1, 0] = r
    ext[1, 1] = 1.0 - r
    probs = np.zeros((2,) * 10)
    for x, y, z, w, u in itertools.product((0, 1), repeat=5):
        for a, d, e in itertools.product((0, 1), repeat=3):
            probs[(x, y, z, w, u, a, 0, 0, d, e)] = (
                ext[x, a] * ext[w, d] * ext[u, e])
    return Behavior(probs, TRILOCAL_EXTREMES, TRILOCAL_INTERMEDIATES)


def all_deterministic_strategies():
    """All 4^5 = 1024 deterministic strategies.

    A strategy assigns each of the five parties an output map {0,1}->{0,1},
    encoded as the pair (output at input 0, output at input 1).
    """
    maps = list(itertools.product((0, 1), repeat=2))
    return list(itertools.product(maps, repeat=5))


def deterministic_behavior(strategy):
    probs = np.zeros((2,) * 10)
    for setting in itertools.product((0, 1), repeat=5):
        outcome = tuple(strategy[i][setting[i]] for i in range(5))
        probs[setting + outcome] = 1.0
    return Behavior(probs, TRILOCAL_EXTREMES, TRILOCAL_INTERMEDIATES)


def enumerate_deterministic(scoring="trilocal"):
    """Exact maximum of a score over all deterministic strategies."""
    if scoring == "trilocal":
        score_fn = trilocal_score
    elif scoring == "local":
        score_fn = local_score
    else:
        raise ValueError("scoring must be 'trilocal' or 'local'")
    best = -np.inf
    best_strategy = None
    for strategy in all_deterministic_strategies():
        report = score_fn(deterministic_behavior(strategy))
        if report.score > best:
            best = report.score
            best_strategy = strategy
    return best, best_strategy
