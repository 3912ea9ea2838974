import math

import numpy as np
import pytest

from bayesconf.harness.classes import bernoulli_grid
from bayesconf.kwik import Bot, KwikAgent, KwikConfig, Predict, bot_bound, kwik_batch, kwik_run, kwik_step
from bayesconf.measures import AllOnes, BernoulliMeasure, Lebesgue
from bayesconf.mixture import ModelClass

GRID41 = bernoulli_grid(41)


def test_config_validation():
    with pytest.raises(ValueError):
        KwikConfig(0.0, 0.1, GRID41)
    with pytest.raises(ValueError):
        KwikConfig(0.05, 1.0, GRID41)
    with pytest.raises(ValueError):
        KwikConfig(0.05, 0.1, ModelClass([Lebesgue(2), AllOnes()], [0.3, 0.7]))


def test_single_model_always_predicts():
    cfg = KwikConfig(0.01, 0.1, ModelClass([BernoulliMeasure(0.4)]))
    agent = KwikAgent.start(cfg)
    assert isinstance(kwik_step(agent, cfg), Predict)
    out = kwik_run(cfg, 0, 5, 50)
    assert not out.failed and out.bot_count == 0 and out.steps == 50
    assert all(isinstance(a, Predict) for a in out.actions)


def test_first_step_threshold():
    # h_hat before any symbol is 2 - sqrt(2) = 0.5858 on the 41-coin grid
    cfg = KwikConfig(0.5, 0.1, GRID41)
    assert kwik_step(KwikAgent.start(cfg), cfg) is Bot
    cfg = KwikConfig(0.6, 0.1, GRID41)
    action = kwik_step(KwikAgent.start(cfg), cfg)
    assert isinstance(action, Predict)
    np.testing.assert_allclose(action.probs, [0.5, 0.5])


def test_bot_is_singleton():
    assert type(Bot)() is Bot
    assert repr(Bot) == "Bot"


def test_bot_bound():
    assert bot_bound(41, 0.05, 0.1, 1.0) == pytest.approx(820 * math.log(410))
    assert bot_bound(41, 0.05, 0.1, 1.0) == pytest.approx(4933.25, abs=0.01)
    assert bot_bound(41, 0.05, 0.1, 0.0) == 0.0
    with pytest.raises(ValueError):
        bot_bound(0, 0.05, 0.1, 1.0)


def test_batch_matches_scalar_runs():
    cfg = KwikConfig(0.05, 0.1, bernoulli_grid(11))
    batch = kwik_batch(cfg, 5, runs=6, seed=9, horizon=120, keep_actions=True, chunk_size=4)
    for i in range(6):
        one = kwik_run(cfg, 5, (9, i), 120)
        assert one.failed == batch.failed[i]
        assert one.bot_count == batch.bot_count[i]
        np.testing.assert_array_equal([isinstance(a, Predict) for a in one.actions], batch.predicted[i])


def test_failure_fraction_small_scale():
    cfg = KwikConfig(0.05, 0.1, GRID41)
    out = kwik_batch(cfg, 20, runs=300, seed=2, horizon=600)
    assert out.runs == 300
    assert out.failed.mean() <= 0.1 + 3 * math.sqrt(0.09 / 300)
    assert np.all(out.bot_count <= 600)
