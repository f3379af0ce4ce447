"""Tests for named state families and closed-form reference bounds."""

import numpy as np
import pytest

from nlocality.families import (closed_form_bound, family_groupings,
                                family_state)
from nlocality.states import biseparable_state, gghz_state


def test_family_state_dispatch():
    assert np.allclose(family_state("gghz", {"alpha": 0.3}), gghz_state(0.3))
    state = family_state("biseparable", {"eta": 0.5, "sigma1": 0.6,
                                         "sigma2": 0.8})
    assert np.allclose(state, biseparable_state(0.5, 0.6, 0.8))


def test_biseparable_sigma2_defaults_to_complement():
    state = family_state("biseparable", {"eta": 0.5, "sigma1": 0.6})
    assert np.allclose(state, biseparable_state(0.5, 0.6, 0.8))


def test_family_parameter_validation():
    with pytest.raises(ValueError):
        family_state("gghz", {})
    with pytest.raises(ValueError):
        family_state("gghz", {"alpha": 0.2, "beta": 1.0})
    with pytest.raises(ValueError):
        family_state("nope", {"alpha": 0.2})


def test_family_groupings_structure():
    b_pair, c_pair = family_groupings("gghz")
    assert len(b_pair) == 2 and len(c_pair) == 2
    assert b_pair[0] == c_pair[0]
    bb, cb = family_groupings("biseparable")
    assert bb[0].is_coherent()
    assert not cb[1].is_balanced()


def test_closed_forms():
    assert closed_form_bound("gghz", {"alpha": 0.0}) == 0.0
    assert abs(closed_form_bound("gghz", {"alpha": np.pi / 4})
               - np.cbrt(2.0)) < 1e-12
    # single-qubit factor in |0>: the pair term drops out
    eta = 0.4
    assert abs(closed_form_bound("biseparable", {"eta": eta, "sigma1": 1.0})
               - np.sin(2 * eta) * np.cbrt(2.0)) < 1e-12
    # balanced single qubit at maximal pair entanglement
    val = closed_form_bound("biseparable",
                            {"eta": np.pi / 4, "sigma1": 1 / np.sqrt(2),
                             "sigma2": 1 / np.sqrt(2)})
    assert abs(val - np.cbrt(2.0)) < 1e-12
    assert abs(closed_form_bound("ghz-symmetric", {"p1": 0.5, "p2": 0.0})
               - np.cbrt(16.0) * 0.5) < 1e-12
    with pytest.raises(ValueError):
        closed_form_bound("depolarized", {"epsilon": 0.5})
