"""Named state families and their default measurement groupings.

Family states are returned in role order (extreme wire, B wire, C wire);
the network module reorders them into the literal source layout.
"""

import numpy as np

from .measurements import GHZGrouping, table1_settings
from .states import (amplitude_damped_ghz, biseparable_state, depolarized_ghz,
                     gghz_state, ghz_symmetric_state, phase_damped_ghz)

FAMILY_PARAMS = {
    "gghz": ("alpha",),
    "biseparable": ("eta", "sigma1", "sigma2"),
    "ghz-symmetric": ("p1", "p2"),
    "depolarized": ("epsilon",),
    "amplitude": ("gamma",),
    "phase": ("gamma",),
}

ALL_PLUS = GHZGrouping(frozenset({(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1)}))
PARITY_SIGNED = GHZGrouping(frozenset({(0, 0, 0), (0, 1, 0), (1, 0, 1),
                                       (1, 1, 1)}))
GHZ_SECTOR = GHZGrouping(frozenset({(0, 0, 0), (1, 0, 0)}))


def _require(params, names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ValueError("missing family parameters: %s" % ", ".join(missing))
    extra = sorted(set(params) - set(names))
    if extra:
        raise ValueError("unknown family parameters: %s" % ", ".join(extra))


def family_state(family, params):
    """Role-ordered source state for a named family point."""
    if family == "gghz":
        _require(params, ("alpha",))
        return gghz_state(params["alpha"])
    if family == "biseparable":
        p = dict(params)
        if p.get("sigma2") is None:
            s1 = p.get("sigma1")
            if s1 is None or not -1 <= s1 <= 1:
                raise ValueError("sigma1 must be given in [-1, 1]")
            p["sigma2"] = np.sqrt(max(0.0, 1 - s1 * s1))
        _require(p, ("eta", "sigma1", "sigma2"))
        return biseparable_state(p["eta"], p["sigma1"], p["sigma2"])
    if family == "ghz-symmetric":
        _require(params, ("p1", "p2"))
        return ghz_symmetric_state(params["p1"], params["p2"])
    if family == "depolarized":
        _require(params, ("epsilon",))
        return depolarized_ghz(params["epsilon"])
    if family == "amplitude":
        _require(params, ("gamma",))
        return amplitude_damped_ghz(params["gamma"])
    if family == "phase":
        _require(params, ("gamma",))
        return phase_damped_ghz(params["gamma"])
    raise ValueError("unknown family %r" % family)


def family_groupings(family):
    """Default (B pair, C pair) of GHZ groupings for a family.

    Most families use the fixed table1_settings groupings; the biseparable
    family uses a coherence bundle derived for the pair-plus-single
    structure, with an unbalanced GHZ-sector grouping on C.
    """
    if family == "biseparable":
        return (ALL_PLUS, PARITY_SIGNED), (ALL_PLUS, GHZ_SECTOR)
    b1, b2, c1, c2 = table1_settings()
    return (b1, b2), (c1, c2)


def closed_form_bound(family, params):
    """Reference formula for the maximal trilocal-inequality value."""
    if family == "gghz":
        return float(np.cbrt(2.0) * np.sin(2 * params["alpha"]))
    if family == "biseparable":
        s1 = params["sigma1"]
        s2 = params.get("sigma2")
        if s2 is None:
            s2 = np.sqrt(max(0.0, 1 - s1 * s1))
        q = abs(s1 * s2)
        sin2 = np.sin(2 * params["eta"])
        term1 = 2 ** (4 / 3) * q * sin2
        term2 = sin2 * np.cbrt(2 * abs(1 - 6 * q * q))
        return float(max(term1, term2))
    if family == "ghz-symmetric":
        return float(np.cbrt(16.0) * abs(params["p1"]))
    raise ValueError("no closed form for family %r" % family)
