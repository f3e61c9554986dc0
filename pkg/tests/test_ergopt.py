"""Optimal invariant averages, subactions, tilts, and ground-set probes."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermoshift import (
    CylinderFunction,
    CylinderMeasure,
    ShiftSpaceError,
    admissible_words,
    brute_force_max_mean,
    cohomologous_tilt,
    conditional_minima,
    full_shift,
    golden_mean_shift,
    ground_support_test,
    m_value,
    point_mass,
    subaction,
)

FULL2 = full_shift(2)
GOLDEN = golden_mean_shift()


def rand_H(model, depth, rng):
    n = len(admissible_words(model, depth))
    return CylinderFunction(model, depth, np.exp(rng.uniform(-2, 2, n)))


def worked_H():
    # -log H = (0, 2, -1, 3) on (00, 01, 10, 11): optimum 0 on the fixed
    # point at symbol 0, subaction (1, -1)
    return CylinderFunction.from_dict(FULL2, 2, {
        (0, 0): 1.0, (0, 1): math.exp(2.0),
        (1, 0): math.exp(-1.0), (1, 1): math.exp(3.0)})


def test_m_value_rejects_nonpositive():
    H = CylinderFunction.from_dict(FULL2, 1, {(0,): 1.0, (1,): 0.0})
    with pytest.raises(ShiftSpaceError):
        m_value(FULL2, H)


def test_worked_example():
    opt = m_value(FULL2, worked_H())
    assert abs(opt.m) < 1e-14
    assert opt.witness_cycle == (0,)
    assert not opt.tie
    V = subaction(FULL2, worked_H())
    assert np.allclose(V.values, [1.0, -1.0], atol=1e-12)
    tilt = cohomologous_tilt(FULL2, worked_H(), V)
    g = -tilt.log()
    eq = {w for w, v in zip(admissible_words(FULL2, g.depth), g.values)
          if abs(v - opt.m) < 1e-10}
    assert eq == {(0, 0), (0, 1)}


def test_fixed_point_values_golden():
    # only admissible cycles count: constant-1 word is forbidden
    H = CylinderFunction.from_dict(GOLDEN, 1, {(0,): 2.0, (1,): 0.25})
    opt = m_value(GOLDEN, H)
    # best cycle is the 01-loop: mean of -(log 2 + log 1/4)/2 = (log 2)/2
    assert abs(opt.m - 0.5 * math.log(2.0)) < 1e-12
    assert set(opt.witness_cycle) == {0, 1}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_karp_matches_cycle_enumeration(seed):
    rng = np.random.default_rng(seed)
    for model in (FULL2, GOLDEN):
        H = rand_H(model, 2, rng)
        opt = m_value(model, H)
        best, cycle = brute_force_max_mean(model, -H.log())
        assert abs(opt.m - best) < 1e-12
        assert cycle in opt.all_witnesses or abs(
            opt.slack[cycle]) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_subaction_slack_nonnegative(seed):
    rng = np.random.default_rng(seed)
    for model in (FULL2, GOLDEN):
        H = rand_H(model, 2, rng)
        opt = m_value(model, H)
        V = subaction(model, H, m=opt.m)
        g = -cohomologous_tilt(model, H, V).log()
        slack = opt.m - np.real(g.values)
        assert slack.min() > -1e-10
        # equality along the witness cycle edges
        words = admissible_words(model, g.depth)
        cyc = opt.witness_cycle
        for i in range(len(cyc)):
            w = tuple((cyc * 3)[i:i + g.depth])
            assert abs(slack[words.index(w)]) < 1e-9


def test_tilt_minimum_is_exp_minus_m():
    rng = np.random.default_rng(7)
    H = rand_H(FULL2, 2, rng)
    opt = m_value(FULL2, H)
    tilt = cohomologous_tilt(FULL2, H, subaction(FULL2, H, m=opt.m))
    assert abs(np.real(tilt.values).min() - math.exp(-opt.m)) < 1e-10


def test_conditional_minima_validation_and_shape():
    H = CylinderFunction.from_dict(FULL2, 1, {(0,): 2.0, (1,): 3.0})
    with pytest.raises(ShiftSpaceError):
        conditional_minima(FULL2, H, 0)
    gs = conditional_minima(FULL2, H, 2)
    assert gs.n == 2 and gs.word_length == 2
    assert gs.members == frozenset({(0, 0)})


def test_conditional_minima_nested():
    # members at n+1 refine members at n: prefixes stay minimal
    for model, H in (
        (FULL2, CylinderFunction.from_dict(FULL2, 1, {(0,): 2.0, (1,): 3.0})),
        (GOLDEN, CylinderFunction.from_dict(
            GOLDEN, 2, {(0, 0): 2.0, (0, 1): 1.0, (1, 0): 1.5})),
    ):
        prev = None
        for n in range(1, 6):
            gs = conditional_minima(model, H, n)
            if prev is not None:
                for w in gs.members:
                    assert w[:prev.word_length] in prev.members
            prev = gs


def ground_H():
    return CylinderFunction.from_dict(FULL2, 1, {(0,): 2.0, (1,): 3.0})


def test_ground_support_bounded_on_minimizing_orbit():
    mu = point_mass(FULL2, (0,), 6)
    rep = ground_support_test(FULL2, CylinderFunction.constant(FULL2, 0.5),
                              ground_H(), mu, 3)
    assert rep["classification"] == "BOUNDED"
    assert rep["sup_I"] <= 1.0 + 1e-9
    assert rep["witness"] is None


def test_ground_support_unbounded_off_minimum():
    # mass on the cylinder 1 0 0 ... whose head is not a conditional minimum
    d = 6
    mu = CylinderMeasure.from_dict(FULL2, d, {(1,) + (0,) * (d - 1): 1.0})
    rep = ground_support_test(FULL2, CylinderFunction.constant(FULL2, 0.5),
                              ground_H(), mu, 3)
    assert rep["classification"] == "UNBOUNDED"
    assert abs(rep["slope"] - math.log(1.5)) / math.log(1.5) < 0.05
    assert rep["witness"] is not None
    assert rep["witness"][0] == 1
