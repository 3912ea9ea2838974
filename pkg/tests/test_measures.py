import math

import numpy as np
import pytest

from bayesconf.measures import (
    AllOnes,
    BernoulliMeasure,
    CategoricalIID,
    ConditioningOnNullSet,
    Lebesgue,
    OnesThenZeros,
    TableMeasure,
    draw_symbol,
    log_prob,
    predictive,
    sample,
)


def test_bernoulli_ignores_history():
    m = BernoulliMeasure(0.5)
    for h in ([], [0], [1, 1, 0, 1]):
        np.testing.assert_array_equal(predictive(m, h), [0.5, 0.5])


def test_ones_then_zeros_switches_at_k():
    m = OnesThenZeros(3)
    np.testing.assert_array_equal(m.predictive([1, 1]), [0.0, 1.0])
    np.testing.assert_array_equal(m.predictive([1, 1, 1]), [1.0, 0.0])
    np.testing.assert_array_equal(m.predictive([1, 1, 1, 0, 0]), [1.0, 0.0])


def test_conditioning_on_null_set():
    with pytest.raises(ConditioningOnNullSet):
        OnesThenZeros(2).predictive([0, 1])
    with pytest.raises(ConditioningOnNullSet):
        AllOnes().predictive([1, 0])
    with pytest.raises(ConditioningOnNullSet):
        BernoulliMeasure(1.0).predictive([0])


def test_table_measure_matches_bernoulli():
    table = TableMeasure.from_measure(BernoulliMeasure(0.25), horizon=3)
    np.testing.assert_allclose(table.predictive([1, 0]), [0.75, 0.25])
    explicit = TableMeasure({(): [0.75, 0.25], (0,): [0.75, 0.25], (1,): [0.75, 0.25]}, 2, 2)
    assert explicit.log_prob([1, 0]) == pytest.approx(math.log(0.25 * 0.75))


def test_table_measure_limits():
    table = TableMeasure.from_measure(AllOnes(), horizon=2)
    with pytest.raises(ConditioningOnNullSet):
        table.predictive([0])
    with pytest.raises(ValueError):
        table.predictive([1, 1])


def test_invalid_distributions_rejected():
    with pytest.raises(ValueError):
        CategoricalIID([0.5, 0.6])
    with pytest.raises(ValueError):
        CategoricalIID([-0.1, 1.1])
    with pytest.raises(ValueError):
        BernoulliMeasure(1.5)
    with pytest.raises(ValueError):
        OnesThenZeros(-1)


def test_symbol_outside_alphabet():
    with pytest.raises(ValueError):
        Lebesgue(2).predictive([2])


def test_log_prob():
    assert log_prob(BernoulliMeasure(0.3), []) == 0.0
    assert log_prob(Lebesgue(2), [0, 1, 1, 0, 1, 0]) == pytest.approx(6 * math.log(0.5))
    assert log_prob(Lebesgue(2), [0, 1, 1, 0, 1, 0]) == pytest.approx(-4.1589, abs=1e-4)
    assert log_prob(AllOnes(), [1, 0]) == -math.inf
    assert log_prob(OnesThenZeros(2), [1, 1, 0, 0]) == 0.0


def test_lebesgue_on_larger_alphabet():
    np.testing.assert_allclose(Lebesgue(4).predictive([3, 1]), [0.25] * 4)


def test_sample_deterministic_measures():
    assert sample(AllOnes(), 7, 5) == [1, 1, 1, 1, 1]
    assert sample(OnesThenZeros(2), 0, 5) == [1, 1, 0, 0, 0]


def test_sample_reproducible():
    m = BernoulliMeasure(0.5)
    assert sample(m, 11, 100) == sample(m, 11, 100)
    assert sample(m, 11, 100) != sample(m, 12, 100)


def test_sample_frequency():
    xs = sample(BernoulliMeasure(0.9), 3, 10_000)
    assert abs(np.mean(xs) - 0.9) <= 0.02


def test_draw_symbol_inverse_cdf():
    p = np.array([0.2, 0.5, 0.3])
    assert draw_symbol(p, 0.0) == 0
    assert draw_symbol(p, 0.19) == 0
    assert draw_symbol(p, 0.2) == 1
    assert draw_symbol(p, 0.69) == 1
    assert draw_symbol(p, 0.7) == 2
    # never lands on a zero-probability final symbol through rounding
    assert draw_symbol(np.array([1.0, 0.0]), 0.999999) == 0


def test_predictive_batch_agrees_with_scalar():
    hist = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 0]])
    for m in (BernoulliMeasure(0.3), TableMeasure.from_measure(BernoulliMeasure(0.3), 4)):
        batch = m.predictive_batch(hist)
        for row, h in zip(batch, hist):
            np.testing.assert_allclose(row, m.predictive(h.tolist()))
    # time-only measures are evaluated once per length; only supported rows count
    m = OnesThenZeros(3)
    batch = m.predictive_batch(hist[:2], mask=np.array([False, True]))
    np.testing.assert_array_equal(batch[1], m.predictive([1, 1, 1]))
