"""Bayes mixture over a finite model class, updated one symbol at a time."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .measures import Measure

__all__ = [
    "ImpossibleObservation",
    "ModelClass",
    "MixtureState",
    "new_mixture",
    "prior_entropy",
    "logsumexp",
]


class ImpossibleObservation(ValueError):
    """The mixture assigned probability zero to the observed symbol."""


def logsumexp(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Max-shifted log-sum-exp that tolerates rows of all ``-inf``."""
    x = np.asarray(x, dtype=np.float64)
    m = np.max(x, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(x - m), axis=axis, keepdims=True)) + m
    return np.squeeze(out, axis=axis)


@dataclass(frozen=True)
class ModelClass:
    """An ordered, finite list of measures with a strictly positive prior."""

    models: tuple[Measure, ...]
    prior: np.ndarray

    def __init__(self, models: Sequence[Measure], prior: Sequence[float] | None = None):
        models = tuple(models)
        if not models:
            raise ValueError("a model class needs at least one model")
        sizes = {m.alphabet_size for m in models}
        if len(sizes) != 1:
            raise ValueError(f"models disagree on the alphabet size: {sorted(sizes)}")
        if prior is None:
            prior = np.full(len(models), 1.0 / len(models))
        prior = np.asarray(prior, dtype=np.float64)
        if prior.shape != (len(models),):
            raise ValueError("prior length does not match the number of models")
        if np.any(prior <= 0) or np.any(prior > 1):
            raise ValueError("prior weights must lie in (0, 1]")
        if abs(prior.sum() - 1.0) > 1e-12:
            raise ValueError(f"prior sums to {prior.sum()!r}, not 1")
        prior = prior.copy()
        prior.setflags(write=False)
        object.__setattr__(self, "models", models)
        object.__setattr__(self, "prior", prior)

    @property
    def size(self) -> int:
        return len(self.models)

    @property
    def alphabet_size(self) -> int:
        return self.models[0].alphabet_size

    @property
    def log_prior(self) -> np.ndarray:
        return np.log(self.prior)

    @property
    def is_uniform(self) -> bool:
        return bool(np.all(self.prior == self.prior[0]))

    def __len__(self):
        return len(self.models)


def prior_entropy(model_class: ModelClass) -> float:
    """Entropy ``-sum w log w`` of the prior, in nats."""
    w = model_class.prior
    return float(-np.sum(w * np.log(w)))


@dataclass
class MixtureState:
    """Posterior over a :class:`ModelClass` after observing ``history``.

    ``log_post`` is always recomputed from ``log w + log nu(x)`` and normalised
    with log-sum-exp; ``log_mix_seq`` accumulates the logs of the mixture's
    one-step conditionals.  The two routes to ``xi(x)`` are independent.
    """

    model_class: ModelClass
    t: int = 0
    history: list[int] = field(default_factory=list)
    log_post: np.ndarray = None
    log_model_seq: np.ndarray = None
    log_mix_seq: float = 0.0

    def __post_init__(self):
        k = self.model_class.size
        if self.log_post is None:
            self.log_post = self.model_class.log_prior.copy()
        if self.log_model_seq is None:
            self.log_model_seq = np.zeros(k)

    @property
    def posterior(self) -> np.ndarray:
        return np.exp(self.log_post)

    @property
    def survivors(self) -> np.ndarray:
        """Indices of models with positive posterior weight."""
        return np.flatnonzero(np.isfinite(self.log_post))

    def model_predictives(self) -> np.ndarray:
        """``(K, A)`` conditionals of every model; eliminated models get NaN rows."""
        k, a = self.model_class.size, self.model_class.alphabet_size
        out = np.full((k, a), np.nan)
        for i in self.survivors:
            out[i] = self.model_class.models[i].predictive(self.history)
        return out

    def predictive(self) -> np.ndarray:
        """The mixture's next-symbol distribution."""
        preds = self.model_predictives()
        post = self.posterior
        xi = np.zeros(self.model_class.alphabet_size)
        for i in self.survivors:
            xi += post[i] * preds[i]
        return xi

    def observe(self, a: int) -> "MixtureState":
        """Condition on symbol ``a`` in place and return ``self``."""
        if not 0 <= a < self.model_class.alphabet_size:
            raise ValueError(f"symbol {a} outside the alphabet")
        preds = self.model_predictives()
        post = self.posterior
        xi_a = sum(post[i] * preds[i, a] for i in self.survivors)
        if xi_a <= 0.0:
            raise ImpossibleObservation(f"every surviving model forbids symbol {a} after {self.history}")
        with np.errstate(divide="ignore"):
            step = np.where(np.isfinite(self.log_post), np.log(np.nan_to_num(preds[:, a])), -np.inf)
        self.log_model_seq = self.log_model_seq + step
        self.log_mix_seq += math.log(xi_a)
        joint = self.model_class.log_prior + self.log_model_seq
        self.log_post = joint - logsumexp(joint)
        self.history.append(int(a))
        self.t += 1
        return self

    def log_posterior_ratio(self, i: int) -> float:
        """``log(nu_i(x) / xi(x))`` for the current history ``x``."""
        return float(self.log_model_seq[i] - self.log_mix_seq)

    def copy(self) -> "MixtureState":
        return MixtureState(
            self.model_class,
            self.t,
            list(self.history),
            self.log_post.copy(),
            self.log_model_seq.copy(),
            self.log_mix_seq,
        )


def new_mixture(model_class: ModelClass) -> MixtureState:
    return MixtureState(model_class)
