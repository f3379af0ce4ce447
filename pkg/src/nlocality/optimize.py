"""Derivative-free maximization of inequality scores and threshold search.

The trilocal optimizer maximizes the designed inequality family: scored
I-value pairs share the C setting (general n: all intermediate settings
after the first coincide), and only coherence groupings of the first
intermediate party enter the scored pairs.  This is the family whose
maxima the closed-form bounds describe; the plain behavior scores in the
network module remain unrestricted.  `maximize_local` is unrestricted.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from . import families
from .measurements import (BlochObservable, GHZGrouping, balanced_groupings,
                           coherent_groupings)
from .network import (NLocalSettings, SettingsBundle, TrilocalNetwork,
                      ZERO_IVALUE_TOL, nlocal_transfers, transfer_ivalues,
                      trilocal_transfer_ivalues, trilocal_transfers)

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


class NoBracketError(RuntimeError):
    """Raised when a threshold search finds no score crossing."""


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 50
    max_iterations: int = 2000
    tolerance: float = 1e-9
    seed: int = 0
    search_groupings: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class OptimizationResult:
    score: float
    settings: object
    tuple_k0: tuple
    tuple_k1: tuple
    i_values: np.ndarray
    angles: np.ndarray
    evaluations: int


@dataclass(frozen=True)
class ThresholdResult:
    parameter: str
    critical_value: float
    bracket_width: float
    score_below: float
    score_above: float


def angles_to_observables(angles):
    """Stack Bloch matrices: angles (theta, phi) pairs -> (k, 2, 2, 2)."""
    angles = np.asarray(angles, dtype=float).reshape(-1, 2, 2)
    theta = angles[..., 0]
    phi = angles[..., 1]
    return (np.sin(theta) * np.cos(phi))[..., None, None] * _SX \
        + (np.sin(theta) * np.sin(phi))[..., None, None] * _SY \
        + np.cos(theta)[..., None, None] * _SZ


def _restricted_score(ivals, coherent_mask, root, share_tail=True):
    """Best designed-inequality value from an I table.

    ivals is indexed by the intermediate setting tuple then k; the first
    intermediate index runs over coherent_mask only, and with share_tail
    the remaining indices are shared between the two I-values of a pair.
    Without share_tail all index tuples are free (the plain score families).
    """
    a = np.abs(ivals)
    a = np.where(a < ZERO_IVALUE_TOL, 0.0, a)
    if coherent_mask is not None:
        a = a[coherent_mask]
    if share_tail:
        best0 = a[..., 0].max(axis=0)
        best1 = a[..., 1].max(axis=0)
        return float(np.max(best0 ** (1.0 / root) + best1 ** (1.0 / root)))
    return float(a[..., 0].max() ** (1.0 / root)
                 + a[..., 1].max() ** (1.0 / root))


def _multistart(objective, dim, cfg, extra_starts=()):
    rng = np.random.default_rng(cfg.seed)
    starts = []
    for _ in range(cfg.restarts):
        x0 = rng.uniform(0.0, np.pi, dim)
        x0[1::2] *= 2.0
        starts.append(x0)
    starts.extend(np.asarray(s, dtype=float) for s in extra_starts)
    evals = [0]

    def wrapped(x):
        evals[0] += 1
        return -objective(x)

    def run(x0):
        res = minimize(wrapped, x0, method="Nelder-Mead",
                       options=dict(maxiter=cfg.max_iterations,
                                    xatol=1e-8, fatol=cfg.tolerance,
                                    adaptive=dim > 12))
        return -res.fun, res.x

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(x0) for x0 in starts]
    best_val, best_x = results[0]
    for val, x in results[1:]:
        if val > best_val + 1e-15:
            best_val, best_x = val, x
    return best_val, best_x, evals[0]


def _angles_to_bloch_pairs(angles):
    angles = np.asarray(angles, dtype=float).reshape(-1, 2, 2)
    return [tuple(BlochObservable(float(t), float(p)) for t, p in party)
            for party in angles]


def _resolve_trilocal(target, groupings):
    """Accept a family point (name, params) or a role-ordered state."""
    if isinstance(target, tuple) and isinstance(target[0], str):
        name, params = target
        state = families.family_state(name, dict(params))
        if groupings is None:
            groupings = families.family_groupings(name)
    else:
        state = target
        if groupings is None:
            groupings = families.family_groupings("gghz")
    net = TrilocalNetwork.from_shared_state(state)
    return net, groupings


def _bundle(groupings, angles):
    pairs = _angles_to_bloch_pairs(angles)
    (b_pair, c_pair) = groupings
    return SettingsBundle(a=pairs[0], b=tuple(b_pair), c=tuple(c_pair),
                          d=pairs[1], t=pairs[2])


def _trilocal_result(net, groupings, cfg, restricted):
    b_pair, c_pair = groupings
    probe = _bundle(groupings, np.zeros(12))
    transfers = trilocal_transfers(net, probe)
    if restricted:
        mask = [y for y in (0, 1) if b_pair[y].is_coherent()]
        if not mask:
            mask = [0, 1]
        root = 3
    else:
        mask = [0, 1]
        root = 1

    def objective(angles):
        ivals = trilocal_transfer_ivalues(transfers,
                                          angles_to_observables(angles))
        return _restricted_score(ivals, mask, root, share_tail=restricted)

    best, x, evals = _multistart(objective, 12, cfg)
    ivals = trilocal_transfer_ivalues(transfers, angles_to_observables(x))
    t0, t1 = _argmax_pair(ivals, mask, root, share_tail=restricted)
    return OptimizationResult(best, _bundle(groupings, x), t0, t1, ivals, x,
                              evals)


def _argmax_pair(ivals, mask, root, share_tail=True):
    a = np.abs(ivals)
    a = np.where(a < ZERO_IVALUE_TOL, 0.0, a)
    n_int = ivals.ndim - 1
    tuples = [t for t in itertools.product((0, 1), repeat=n_int)
              if t[0] in mask]
    best = -np.inf
    best_pair = (tuples[0], tuples[0])
    for t0 in tuples:
        for t1 in tuples:
            if share_tail and t0[1:] != t1[1:]:
                continue
            val = a[t0 + (0,)] ** (1.0 / root) + a[t1 + (1,)] ** (1.0 / root)
            if val > best:
                best = val
                best_pair = (t0, t1)
    return best_pair


def maximize_trilocal(target, cfg=None, groupings=None):
    """Maximize the designed trilocal inequality family over extreme angles.

    `target` is either a (family, params) pair or a role-ordered source
    state shared by the three sources.  With search_groupings enabled, a
    coordinate search over grouping candidates re-optimizes angles per
    candidate (coherence groupings for B, balanced for C).
    """
    cfg = cfg or OptimizerConfig()
    net, groupings = _resolve_trilocal(target, groupings)
    result = _trilocal_result(net, groupings, cfg, restricted=True)
    if not cfg.search_groupings:
        return result
    inner = replace(cfg, restarts=max(4, cfg.restarts // 8),
                    search_groupings=False)
    b_cands = coherent_groupings()
    c_cands = balanced_groupings()
    current = [list(groupings[0]), list(groupings[1])]
    for side, cands in ((0, b_cands), (1, c_cands)):
        for slot in (0, 1):
            for cand in cands:
                trial = [tuple(current[0]), tuple(current[1])]
                trial_side = list(trial[side])
                trial_side[slot] = cand
                trial[side] = tuple(trial_side)
                r = _trilocal_result(net, tuple(trial), inner, restricted=True)
                if r.score > result.score + 1e-9:
                    result = r
                    current[side][slot] = cand
    final = _trilocal_result(net, (tuple(current[0]), tuple(current[1])),
                             cfg, restricted=True)
    return final if final.score >= result.score else result


def maximize_local(target, cfg=None, groupings=None):
    """Maximize the local score |I| + |J| over all 16 tuples (unrestricted)."""
    cfg = cfg or OptimizerConfig()
    net, groupings = _resolve_trilocal(target, groupings)
    return _trilocal_result(net, groupings, cfg, restricted=False)


_THRESHOLD_FAMILIES = {
    "depolarized": "epsilon",
    "amplitude": "gamma",
    "phase": "gamma",
}


def _threshold_states(family, value, mode):
    if mode == "joint":
        state = families.family_state(family, {_THRESHOLD_FAMILIES[family]:
                                               value})
        return (state, state, state)
    if mode != "single":
        raise ValueError("mode must be 'joint' or 'single'")
    noisy = families.family_state(family, {_THRESHOLD_FAMILIES[family]: value})
    clean_value = 1.0 if family == "depolarized" else 0.0
    clean = families.family_state(family, {_THRESHOLD_FAMILIES[family]:
                                           clean_value})
    return (noisy, clean, clean)


def visibility_threshold(family, cfg=None, mode="joint", grid_points=9):
    """Bisection for the noise parameter where the optimized score crosses 1.

    Returns a ThresholdResult with bracket width at most 1e-4; raises
    NoBracketError when the coarse grid shows no crossing.
    """
    cfg = cfg or OptimizerConfig()
    if family not in _THRESHOLD_FAMILIES:
        raise ValueError("no threshold family %r" % family)
    parameter = _THRESHOLD_FAMILIES[family]
    groupings = families.family_groupings(family)

    warm = []

    def score_at(value):
        states = _threshold_states(family, value, mode)
        net = TrilocalNetwork.from_role_states(*states)
        probe = _bundle(groupings, np.zeros(12))
        transfers = trilocal_transfers(net, probe)
        mask = [y for y in (0, 1) if groupings[0][y].is_coherent()] or [0, 1]

        def objective(angles):
            ivals = trilocal_transfer_ivalues(transfers,
                                              angles_to_observables(angles))
            return _restricted_score(ivals, mask, 3)

        best, x, _ = _multistart(objective, 12, cfg, extra_starts=tuple(warm))
        del warm[:]
        warm.append(x)
        return best

    grid = np.linspace(0.0, 1.0, grid_points)
    scores = [score_at(v) for v in grid]
    lo = hi = None
    for a, b, sa, sb in zip(grid, grid[1:], scores, scores[1:]):
        if (sa - 1.0) * (sb - 1.0) <= 0 and sa != sb:
            lo, hi, s_lo, s_hi = a, b, sa, sb
            break
    if lo is None:
        raise NoBracketError("no score crossing of 1 found for %s" % family)
    while hi - lo > 1e-4:
        mid = (lo + hi) / 2
        sm = score_at(mid)
        if (s_lo - 1.0) * (sm - 1.0) <= 0:
            hi, s_hi = mid, sm
        else:
            lo, s_lo = mid, sm
    critical = (lo + hi) / 2
    below, above = (s_lo, s_hi) if s_lo <= s_hi else (s_hi, s_lo)
    return ThresholdResult(parameter, float(critical), float(hi - lo),
                           float(below), float(above))


def closed_form_bound(family, params):
    """Reference formula value for the trilocal maximum of a family."""
    return families.closed_form_bound(family, dict(params))


# ---------------------------------------------------------------------------
# n-local optimization


def default_nlocal_groupings(n):
    """Default grouping pairs for the n-1 intermediates."""
    if n == 3:
        (b_pair, c_pair) = families.family_groupings("gghz")
        return (b_pair, c_pair)
    flips = list(itertools.product((0, 1), repeat=n - 1))
    all_plus = GHZGrouping(frozenset((0,) + f for f in flips), n)
    parity = GHZGrouping(frozenset((sum(f) % 2,) + f for f in flips), n)
    return tuple((all_plus, parity) for _ in range(n - 1))


def maximize_nlocal(net, cfg=None, groupings=None):
    """Maximize the designed n-local inequality family for a network."""
    cfg = cfg or OptimizerConfig()
    n = net.n
    if groupings is None:
        groupings = default_nlocal_groupings(n)
    settings = NLocalSettings(
        extremes=tuple(_angles_to_bloch_pairs(np.zeros(4 * n))),
        intermediates=tuple(tuple(pair) for pair in groupings))
    transfers = nlocal_transfers(net, settings)
    first = groupings[0]
    mask = [y for y in (0, 1) if first[y].is_coherent()] or [0, 1]

    def objective(angles):
        ivals = transfer_ivalues(n, transfers, angles_to_observables(angles))
        return _restricted_score(ivals, mask, n)

    best, x, evals = _multistart(objective, 4 * n, cfg)
    ivals = transfer_ivalues(n, transfers, angles_to_observables(x))
    t0, t1 = _argmax_pair(ivals, mask, n)
    final = NLocalSettings(extremes=tuple(_angles_to_bloch_pairs(x)),
                           intermediates=tuple(tuple(p) for p in groupings))
    return OptimizationResult(best, final, t0, t1, ivals, x, evals)
