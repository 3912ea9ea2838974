import numpy as np
import pytest

from bayesconf.harness.classes import bernoulli_grid, resolve_class
from bayesconf.harness.experiment import trace_run
from bayesconf.simulate import TRACE_FIELDS, draw_symbols, simulate
from bayesconf.measures import draw_symbol

FIELDS = ("h", "d", "c", "h_hat", "d_hat", "log_z")


@pytest.mark.parametrize("name", ["fix-a", "fix-c", "bernoulli-grid-9"])
def test_batch_matches_scalar_reference(name):
    spec = resolve_class(name)
    horizon, runs = 25, 5
    res = simulate(spec.model_class, spec.truth, horizon, runs, seed=4, delta=0.1, record=FIELDS, chunk_size=2)
    for i in range(runs):
        ref = trace_run(spec.model_class, spec.truth, (4, i), horizon, 0.1)
        for f in FIELDS:
            np.testing.assert_allclose(res.traces[f][i], getattr(ref, f), rtol=1e-12, atol=1e-12, err_msg=f)
        assert res.D[i] == pytest.approx(ref.totals.D, rel=1e-12, abs=1e-12)
        assert res.H[i] == pytest.approx(ref.totals.H, rel=1e-12, abs=1e-12)
        assert res.C[i] == pytest.approx(ref.totals.C, rel=1e-12, abs=1e-12)
        assert res.sup_log_z[i] == pytest.approx(ref.totals.sup_log_z, abs=1e-12)


def test_trace_sums_match_totals():
    spec = resolve_class("bernoulli-grid-9")
    ref = trace_run(spec.model_class, spec.truth, 0, 40, 0.1)
    assert len(ref.h) == 40 and len(ref.symbols) == 40
    assert ref.totals.D == pytest.approx(ref.d.sum(), rel=1e-13)
    assert ref.totals.H == pytest.approx(ref.h.sum(), rel=1e-13)
    assert ref.totals.C == pytest.approx(ref.c.sum(), rel=1e-13)


def test_chunking_and_workers_do_not_change_results():
    mc = bernoulli_grid(11)
    a = simulate(mc, 5, 30, 9, seed=3, delta=0.1, record=("h_hat",), chunk_size=9)
    b = simulate(mc, 5, 30, 9, seed=3, delta=0.1, record=("h_hat",), chunk_size=2)
    c = simulate(mc, 5, 30, 9, seed=3, delta=0.1, record=("h_hat",), chunk_size=4, workers=2)
    for other in (b, c):
        np.testing.assert_array_equal(a.D, other.D)
        np.testing.assert_array_equal(a.sum_h_hat, other.sum_h_hat)
        np.testing.assert_array_equal(a.traces["h_hat"], other.traces["h_hat"])


def test_runs_are_independent_of_run_count():
    mc = bernoulli_grid(5)
    small = simulate(mc, 2, 20, 3, seed=8, delta=0.1)
    large = simulate(mc, 2, 20, 7, seed=8, delta=0.1)
    np.testing.assert_array_equal(small.D, large.D[:3])


def test_single_model_class_is_trivial():
    spec = resolve_class("single")
    res = simulate(spec.model_class, 0, 50, 10, seed=1, delta=0.1, record=TRACE_FIELDS)
    assert np.all(res.D == 0) and np.all(res.H == 0) and np.all(res.C == 0)
    assert np.all(res.traces["h_hat"] == 0)
    assert not res.h_violation.any() and not res.truth_ejected.any()


def test_validation():
    mc = bernoulli_grid(3)
    with pytest.raises(ValueError):
        simulate(mc, 0, 0, 1, 1, 0.1)
    with pytest.raises(ValueError):
        simulate(mc, 3, 5, 1, 1, 0.1)
    with pytest.raises(ValueError):
        simulate(mc, 0, 5, 1, 1, 0.1, record=("nope",))


def test_draw_symbols_matches_scalar():
    rng = np.random.default_rng(0)
    probs = rng.dirichlet(np.ones(4), size=50)
    u = rng.random(50)
    expect = [draw_symbol(p, x) for p, x in zip(probs, u)]
    np.testing.assert_array_equal(draw_symbols(probs, u), expect)
