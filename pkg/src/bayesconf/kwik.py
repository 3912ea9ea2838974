"""KWIK ("knows what it knows") learner built on the Hellinger confidence bound.

The agent predicts the mixture distribution whenever ``h_hat <= epsilon`` and
abstains otherwise.  The environment fixes the true model up front, judges
every prediction against that model's exact conditional, and always reveals
the next symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .confidence import ConfidenceParams, PlausibleSet, h_hat, weighted_sup
from .divergence import hellinger_sq, total_variation
from .measures import draw_symbol, run_rng
from .mixture import MixtureState, ModelClass, new_mixture
from .simulate import DEFAULT_CHUNK, BatchMixture, draw_symbols, run_uniforms

__all__ = [
    "KwikConfig",
    "Predict",
    "Bot",
    "KwikAction",
    "KwikAgent",
    "KwikRunOutcome",
    "KwikBatchOutcome",
    "kwik_step",
    "kwik_run",
    "kwik_batch",
    "bot_bound",
]


@dataclass(frozen=True)
class KwikConfig:
    epsilon: float
    delta: float
    model_class: ModelClass

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if not self.model_class.is_uniform:
            raise ValueError("the KWIK learner requires a uniform prior")

    @property
    def params(self) -> ConfidenceParams:
        return ConfidenceParams(self.delta, 1.0 / self.model_class.size)


@dataclass(frozen=True)
class Predict:
    probs: np.ndarray


class _BotType:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Bot"


Bot = _BotType()
KwikAction = Union[Predict, _BotType]


@dataclass
class KwikAgent:
    """Mixture state and plausible set advanced together."""

    state: MixtureState
    plausible: PlausibleSet

    @classmethod
    def start(cls, cfg: KwikConfig) -> "KwikAgent":
        agent = cls(new_mixture(cfg.model_class), PlausibleSet.full(cfg.model_class, cfg.params))
        agent.plausible.update(agent.state)
        return agent

    def observe(self, a: int) -> None:
        self.state.observe(a)
        self.plausible.update(self.state)


def kwik_step(agent: KwikAgent, cfg: KwikConfig) -> KwikAction:
    if h_hat(agent.plausible, agent.state) <= cfg.epsilon:
        return Predict(agent.state.predictive())
    return Bot


@dataclass
class KwikRunOutcome:
    failed: bool
    bot_count: int
    steps: int
    actions: list = field(repr=False, default_factory=list)


def kwik_run(cfg: KwikConfig, truth: int, seed, horizon: int) -> KwikRunOutcome:
    """One run of the agent against model ``truth``.

    A failed run keeps going to the horizon; ``failed`` latches.
    """
    mu = cfg.model_class.models[truth]
    uniforms = run_rng(seed).random(horizon)
    agent = KwikAgent.start(cfg)
    failed = False
    actions = []
    for t in range(horizon):
        action = kwik_step(agent, cfg)
        actions.append(action)
        p_true = mu.predictive(agent.state.history)
        if isinstance(action, Predict) and hellinger_sq(action.probs, p_true) > cfg.epsilon:
            failed = True
        agent.observe(draw_symbol(p_true, uniforms[t]))
    bots = sum(1 for a in actions if a is Bot)
    return KwikRunOutcome(failed, bots, horizon, actions)


@dataclass
class KwikBatchOutcome:
    """Results of many runs; ``max_tv`` is the largest total variation on a predicting step."""

    failed: np.ndarray
    bot_count: np.ndarray
    max_tv: np.ndarray
    predicted: np.ndarray | None = None

    @property
    def runs(self) -> int:
        return self.failed.size


def _kwik_chunk(cfg: KwikConfig, truth, horizon, seed, start, stop, keep_actions):
    n = stop - start
    mc = cfg.model_class
    u = run_uniforms(seed, start, stop, horizon)
    bm = BatchMixture(mc, n, horizon)
    params = cfg.params
    weights = mc.prior / params.w_mu_assumed
    thresholds = params.log_thresholds(mc.prior)
    alive = np.ones((n, mc.size), dtype=bool)
    failed = np.zeros(n, dtype=bool)
    bots = np.zeros(n, dtype=np.int64)
    max_tv = np.zeros(n)
    predicted = np.zeros((n, horizon), dtype=bool) if keep_actions else None
    for t in range(horizon):
        preds = bm.predictives()
        xi = bm.mix(bm.posterior(), preds)
        full = np.broadcast_to(preds, (n,) + preds.shape[1:])
        p_true = full[:, truth]
        alive &= (bm.lm - bm.lxi[:, None]) >= thresholds
        hh = weighted_sup(hellinger_sq(full, xi[:, None, :]), alive, weights)
        predict = hh <= cfg.epsilon
        failed |= predict & (hellinger_sq(xi, p_true) > cfg.epsilon)
        bots += ~predict
        np.maximum(max_tv, np.where(predict, total_variation(xi, p_true), 0.0), out=max_tv)
        if keep_actions:
            predicted[:, t] = predict
        bm.observe(draw_symbols(p_true, u[:, t]), preds, xi)
    return KwikBatchOutcome(failed, bots, max_tv, predicted)


def kwik_batch(
    cfg: KwikConfig,
    truth: int,
    runs: int,
    seed: int,
    horizon: int,
    keep_actions: bool = False,
    chunk_size: int = DEFAULT_CHUNK,
) -> KwikBatchOutcome:
    """Vectorised equivalent of ``[kwik_run(cfg, truth, (seed, i), horizon) for i in range(runs)]``."""
    parts = [
        _kwik_chunk(cfg, truth, horizon, seed, a, min(a + chunk_size, runs), keep_actions)
        for a in range(0, runs, chunk_size)
    ]
    return KwikBatchOutcome(
        np.concatenate([p.failed for p in parts]),
        np.concatenate([p.bot_count for p in parts]),
        np.concatenate([p.max_tv for p in parts]),
        np.concatenate([p.predicted for p in parts]) if keep_actions else None,
    )


def bot_bound(K: int, epsilon: float, delta: float, constant: float) -> float:
    """``constant * (K / epsilon) * log(K / delta)``."""
    if K < 1 or epsilon <= 0 or not 0 < delta < 1 or constant < 0:
        raise ValueError("bot_bound needs K >= 1, epsilon > 0, 0 < delta < 1, constant >= 0")
    return constant * (K / epsilon) * math.log(K / delta)
