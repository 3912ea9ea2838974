import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bayesconf.confidence import (
    ConfidenceParams,
    PlausibleSet,
    d_hat,
    h_hat,
    hoeffding_f,
    hoeffding_g,
    update_plausible,
    weighted_sup,
)
from bayesconf.divergence import hellinger_sq
from bayesconf.harness.classes import bernoulli_grid
from bayesconf.measures import AllOnes, BernoulliMeasure, Lebesgue, OnesThenZeros
from bayesconf.mixture import ModelClass, new_mixture

FIX_C = ModelClass([Lebesgue(2), AllOnes()])


def _start(mc, delta, w_mu=None):
    params = ConfidenceParams.for_class(mc, delta, w_mu)
    s = new_mixture(mc)
    return s, update_plausible(PlausibleSet.full(mc, params), s)


def test_params_validation():
    with pytest.raises(ValueError):
        ConfidenceParams(0.0, 0.5)
    with pytest.raises(ValueError):
        ConfidenceParams(0.1, 0.0)
    assert ConfidenceParams.for_class(bernoulli_grid(41), 0.1).w_mu_assumed == pytest.approx(1 / 41)


def test_all_alive_at_start():
    _, ps = _start(bernoulli_grid(41), 0.1)
    assert ps.alive.all()


def test_zero_ratio_clears_flag():
    s, ps = _start(ModelClass([AllOnes(), OnesThenZeros(0)]), 0.1)
    s.observe(1)
    ps.update(s)
    np.testing.assert_array_equal(ps.alive, [True, False])


def test_membership_after_zero():
    s, ps = _start(FIX_C, 0.5, 0.5)
    s.observe(0)
    ps.update(s)
    np.testing.assert_array_equal(ps.alive, [True, False])


def test_membership_is_monotone():
    s, ps = _start(bernoulli_grid(11), 0.1)
    prev = ps.alive.copy()
    for a in [1] * 8 + [0] * 20:
        s.observe(a)
        ps.update(s)
        assert not np.any(ps.alive & ~prev)
        prev = ps.alive.copy()


def test_exact_ties_count_as_plausible():
    # after one symbol theta = 2/40 has ratio exactly delta = 0.1
    s, ps = _start(bernoulli_grid(41), 0.1)
    s.observe(1)
    ps.update(s)
    assert ps.alive[2] and not ps.alive[1]
    s, ps = _start(bernoulli_grid(41), 0.1)
    s.observe(0)
    ps.update(s)
    assert ps.alive[38] and not ps.alive[39]


def test_h_hat_values():
    s, ps = _start(ModelClass([BernoulliMeasure(0.3)]), 0.1)
    assert h_hat(ps, s) == 0.0
    s, ps = _start(bernoulli_grid(41), 0.1)
    assert h_hat(ps, s) == pytest.approx(2 - math.sqrt(2))
    assert h_hat(ps, s) == pytest.approx(0.585786, abs=1e-6)


def test_h_hat_empty_is_infinite():
    s, ps = _start(bernoulli_grid(3), 0.1)
    ps.alive[:] = False
    assert ps.empty
    assert h_hat(ps, s) == math.inf
    assert weighted_sup(np.ones(3), np.zeros(3, dtype=bool), np.ones(3)) == math.inf


def test_d_hat_values():
    s, _ = _start(ModelClass([BernoulliMeasure(0.3)]), 0.1)
    assert d_hat(s, ConfidenceParams(0.1, 1.0)) == 0.0
    s, _ = _start(FIX_C, 0.1)
    # c_0 = 0.215762 for FIX-C, so d_hat = c_0 / 0.05
    assert d_hat(s, ConfidenceParams(0.1, 0.5)) == pytest.approx(4.315231, abs=1e-6)


def test_hoeffding():
    assert hoeffding_f(10, 0.1) == pytest.approx(math.sqrt(math.log(20) / 20))
    assert hoeffding_f(10, 0.1) == pytest.approx(0.387023, abs=1e-6)
    assert hoeffding_f(40, 0.1) == pytest.approx(hoeffding_f(10, 0.1) / 2)
    assert hoeffding_f(7, 2 / math.e**2) == pytest.approx(math.sqrt(1 / 7))
    assert hoeffding_g(10, 0.1) == pytest.approx(math.sqrt(math.log(2200) / 20))
    assert hoeffding_g(10, 0.1) == pytest.approx(0.620331, abs=1e-6)
    with pytest.raises(ValueError):
        hoeffding_f(0, 0.1)
    with pytest.raises(ValueError):
        hoeffding_g(3, 1.0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 1), max_size=40), st.sampled_from([0.05, 0.1, 0.5]), st.integers(0, 6))
def test_h_hat_covers_h_while_truth_plausible(history, delta, truth):
    mc = bernoulli_grid(7)
    s, ps = _start(mc, delta)
    for a in history:
        s.observe(a)
        ps.update(s)
        if ps.alive[truth]:
            h = hellinger_sq(mc.models[truth].predictive(s.history), s.predictive())
            assert h <= h_hat(ps, s) + 1e-12
