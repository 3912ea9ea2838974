"""Computable confidence bounds on the mixture's prediction error.

``h_hat`` bounds the squared Hellinger error and ``d_hat`` the KL error; both
hold simultaneously for all time steps with probability at least ``1 - delta``
when ``w_mu_assumed`` is no larger than the true model's prior weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .divergence import hellinger_sq, info_gain
from .mixture import MixtureState, ModelClass

__all__ = [
    "ConfidenceParams",
    "PlausibleSet",
    "update_plausible",
    "h_hat",
    "d_hat",
    "weighted_sup",
    "hoeffding_f",
    "hoeffding_g",
]


# exact ties with the threshold must count as plausible; rounding can miss them
TIE_TOL = 1e-9


@dataclass(frozen=True)
class ConfidenceParams:
    delta: float
    w_mu_assumed: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if not 0.0 < self.w_mu_assumed <= 1.0:
            raise ValueError("w_mu_assumed must lie in (0, 1]")

    @classmethod
    def for_class(cls, model_class: ModelClass, delta: float, w_mu_assumed: float | None = None):
        """Defaults ``w_mu_assumed`` to the smallest prior weight (1/K when uniform)."""
        if w_mu_assumed is None:
            w_mu_assumed = float(model_class.prior.min())
        return cls(delta, w_mu_assumed)

    def log_thresholds(self, prior: np.ndarray) -> np.ndarray:
        """Per-model ``log(delta * w_mu / w_nu)`` for the membership test."""
        return math.log(self.delta * self.w_mu_assumed) - np.log(prior) - TIE_TOL


@dataclass
class PlausibleSet:
    """Models whose likelihood ratio to the mixture never fell below threshold."""

    alive: np.ndarray
    params: ConfidenceParams

    @classmethod
    def full(cls, model_class: ModelClass, params: ConfidenceParams) -> "PlausibleSet":
        return cls(np.ones(model_class.size, dtype=bool), params)

    def update(self, s: MixtureState) -> "PlausibleSet":
        ratios = s.log_model_seq - s.log_mix_seq
        thresholds = self.params.log_thresholds(s.model_class.prior)
        self.alive = self.alive & (ratios >= thresholds)
        return self

    @property
    def empty(self) -> bool:
        return not self.alive.any()


def update_plausible(ps: PlausibleSet, s: MixtureState) -> PlausibleSet:
    return ps.update(s)


def weighted_sup(values: np.ndarray, alive: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """``max`` over alive entries of ``weights * values`` along the last axis.

    Returns ``+inf`` where nothing is alive.
    """
    scored = np.where(alive, weights * values, -np.inf)
    out = np.max(scored, axis=-1)
    return np.where(np.isneginf(out), np.inf, out)


def h_hat(ps: PlausibleSet, s: MixtureState) -> float:
    """Largest weighted squared Hellinger distance from a plausible model to the mixture.

    An empty plausible set gives ``+inf``: the truth has already been lost, so
    no finite bound can be claimed.
    """
    if ps.empty:
        return math.inf
    xi = s.predictive()
    preds = s.model_predictives()
    # alive models always have positive posterior, so their rows are defined
    rows = np.where(ps.alive[:, None], preds, xi)
    weights = s.model_class.prior / ps.params.w_mu_assumed
    return float(weighted_sup(hellinger_sq(rows, xi), ps.alive, weights))


def d_hat(s: MixtureState, params: ConfidenceParams) -> float:
    return info_gain(s) / (params.w_mu_assumed * params.delta)


def _check_td(t, delta):
    if t < 1:
        raise ValueError("t must be at least 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")


def hoeffding_f(t: int, delta: float) -> float:
    """Per-step Hoeffding radius ``sqrt(log(2/delta) / (2t))``."""
    _check_td(t, delta)
    return math.sqrt(math.log(2.0 / delta) / (2.0 * t))


def hoeffding_g(t: int, delta: float) -> float:
    """Hoeffding radius with a union bound over all steps."""
    _check_td(t, delta)
    return math.sqrt(math.log(2.0 * t * (t + 1) / delta) / (2.0 * t))
