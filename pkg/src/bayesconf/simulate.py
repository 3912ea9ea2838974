"""Vectorised Monte Carlo over many independent runs.

Every run ``i`` draws its uniforms from the stream ``(seed, i)``, and all
reductions are per run, so results do not depend on how runs are split into
chunks or spread across worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .confidence import ConfidenceParams, weighted_sup
from .divergence import hellinger_sq, kl, total_variation
from .measures import run_rng
from .mixture import ImpossibleObservation, ModelClass, logsumexp

__all__ = ["BatchMixture", "SimulationResult", "simulate", "run_uniforms", "TRACE_FIELDS"]

TRACE_FIELDS = ("h", "d", "c", "tv", "h_hat", "d_hat", "log_z")
DEFAULT_CHUNK = 2000


def run_uniforms(seed: int, start: int, stop: int, horizon: int) -> np.ndarray:
    """Uniform draws for runs ``start..stop-1``, shape ``(runs, horizon)``."""
    return np.stack([run_rng((seed, i)).random(horizon) for i in range(start, stop)])


class BatchMixture:
    """``N`` independent copies of the Bayes mixture advanced in lock-step."""

    def __init__(self, model_class: ModelClass, n: int, horizon: int):
        self.model_class = model_class
        self.n = n
        k = model_class.size
        self.log_prior = model_class.log_prior
        self.lm = np.zeros((n, k))
        self.lxi = np.zeros(n)
        self.hist = np.zeros((n, horizon), dtype=np.int16)
        self.t = 0
        self._iid = all(m.iid for m in model_class.models)
        if self._iid:
            self._iid_preds = np.stack([m.predictive(()) for m in model_class.models])[None]

    def predictives(self) -> np.ndarray:
        """``(N, K, A)`` conditionals; rows of eliminated models are placeholders."""
        if self._iid:
            return self._iid_preds
        hist = self.hist[:, : self.t]
        cols = [
            m.predictive_batch(hist, np.isfinite(self.lm[:, j]))
            for j, m in enumerate(self.model_class.models)
        ]
        return np.stack(cols, axis=1)

    def posterior(self) -> np.ndarray:
        joint = self.log_prior + self.lm
        return np.exp(joint - logsumexp(joint)[:, None])

    @staticmethod
    def mix(post: np.ndarray, preds: np.ndarray) -> np.ndarray:
        return np.sum(post[:, :, None] * preds, axis=1)

    def observe(self, symbols: np.ndarray, preds: np.ndarray, xi: np.ndarray) -> None:
        rows = np.arange(self.n)
        xi_a = xi[rows, symbols]
        if np.any(xi_a <= 0.0):
            raise ImpossibleObservation("mixture assigned probability 0 to an observed symbol")
        step = np.broadcast_to(preds, (self.n,) + preds.shape[1:])[rows, :, symbols]
        with np.errstate(divide="ignore"):
            self.lm = self.lm + np.where(np.isfinite(self.lm), np.log(step), -np.inf)
            self.lxi = self.lxi + np.log(xi_a)
        self.hist[:, self.t] = symbols
        self.t += 1


def draw_symbols(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise inverse-CDF draws; matches :func:`bayesconf.measures.draw_symbol`."""
    cdf = np.cumsum(probs, axis=-1)
    return np.minimum(np.sum(cdf <= u[:, None], axis=-1), probs.shape[-1] - 1)


@dataclass
class SimulationResult:
    """Per-run totals over ``horizon`` steps plus any requested per-step traces."""

    runs: int
    horizon: int
    D: np.ndarray
    H: np.ndarray
    C: np.ndarray
    sum_h_hat: np.ndarray
    sum_h_hat_nonempty: np.ndarray
    sum_d_hat: np.ndarray
    sup_log_z: np.ndarray
    h_violation: np.ndarray
    d_violation: np.ndarray
    truth_ejected: np.ndarray
    emptied: np.ndarray
    traces: dict[str, np.ndarray] = field(default_factory=dict)

    @staticmethod
    def concat(parts: list["SimulationResult"]) -> "SimulationResult":
        names = [f for f in SimulationResult.__dataclass_fields__ if f not in ("runs", "horizon", "traces")]
        merged = {f: np.concatenate([getattr(p, f) for p in parts]) for f in names}
        traces = {k: np.concatenate([p.traces[k] for p in parts]) for k in parts[0].traces}
        return SimulationResult(sum(p.runs for p in parts), parts[0].horizon, traces=traces, **merged)


def _simulate_chunk(model_class, truth, horizon, seed, start, stop, params, record):
    n = stop - start
    u = run_uniforms(seed, start, stop, horizon)
    bm = BatchMixture(model_class, n, horizon)
    weights = model_class.prior / params.w_mu_assumed
    thresholds = params.log_thresholds(model_class.prior)
    scale = 1.0 / (params.w_mu_assumed * params.delta)

    alive = np.ones((n, model_class.size), dtype=bool)
    tot = {k: np.zeros(n) for k in ("D", "H", "C", "sum_h_hat", "sum_h_hat_nonempty", "sum_d_hat")}
    sup_log_z = np.full(n, -math.inf)
    flags = {k: np.zeros(n, dtype=bool) for k in ("h_violation", "d_violation", "truth_ejected", "emptied")}
    traces = {k: np.empty((n, horizon)) for k in record}

    for t in range(horizon):
        preds = bm.predictives()
        post = bm.posterior()
        xi = bm.mix(post, preds)
        full = np.broadcast_to(preds, (n,) + preds.shape[1:])
        p_true = full[:, truth]

        h_all = hellinger_sq(full, xi[:, None, :])
        with np.errstate(invalid="ignore"):
            kl_all = kl(full, xi[:, None, :])
            c = np.sum(np.where(post > 0, post * kl_all, 0.0), axis=1)
        h = h_all[:, truth]
        d = kl_all[:, truth]

        alive &= (bm.lm - bm.lxi[:, None]) >= thresholds
        hh = weighted_sup(h_all, alive, weights)
        dh = c * scale
        log_z = bm.lxi - bm.lm[:, truth]

        tot["D"] += d
        tot["H"] += h
        tot["C"] += c
        tot["sum_h_hat"] += hh
        tot["sum_h_hat_nonempty"] += np.where(np.isfinite(hh), hh, 0.0)
        tot["sum_d_hat"] += dh
        np.maximum(sup_log_z, log_z, out=sup_log_z)
        flags["h_violation"] |= h > hh
        flags["d_violation"] |= d > dh
        flags["truth_ejected"] |= ~alive[:, truth]
        flags["emptied"] |= ~alive.any(axis=1)

        step = {"h": h, "d": d, "c": c, "h_hat": hh, "d_hat": dh, "log_z": log_z}
        for k in record:
            traces[k][:, t] = step[k] if k != "tv" else total_variation(p_true, xi)

        bm.observe(draw_symbols(p_true, u[:, t]), preds, xi)

    # the state after the final observation also belongs to the sup
    np.maximum(sup_log_z, bm.lxi - bm.lm[:, truth], out=sup_log_z)
    return SimulationResult(n, horizon, sup_log_z=sup_log_z, traces=traces, **tot, **flags)


def simulate(
    model_class: ModelClass,
    truth: int,
    horizon: int,
    runs: int,
    seed: int,
    delta: float,
    w_mu_assumed: float | None = None,
    record: tuple[str, ...] = (),
    chunk_size: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> SimulationResult:
    """Sample ``runs`` sequences of length ``horizon`` from model ``truth``.

    Quantities at step ``t`` are computed before the ``t``-th symbol is seen.
    ``record`` names per-step quantities from :data:`TRACE_FIELDS` to keep as
    ``(runs, horizon)`` arrays.
    """
    if runs < 1 or horizon < 1:
        raise ValueError("runs and horizon must be positive")
    if not 0 <= truth < model_class.size:
        raise ValueError("truth index out of range")
    unknown = set(record) - set(TRACE_FIELDS)
    if unknown:
        raise ValueError(f"unknown trace fields {sorted(unknown)}")
    params = ConfidenceParams.for_class(model_class, delta, w_mu_assumed)
    bounds = [(s, min(s + chunk_size, runs)) for s in range(0, runs, chunk_size)]
    args = [(model_class, truth, horizon, seed, a, b, params, tuple(record)) for a, b in bounds]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_chunk, *zip(*args)))
    else:
        parts = [_simulate_chunk(*a) for a in args]
    return SimulationResult.concat(parts)
