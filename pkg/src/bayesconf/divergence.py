"""One-step divergences between predictive distributions and their running sums.

The distance functions broadcast over leading axes; the alphabet is always the
last axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixture import MixtureState

__all__ = [
    "hellinger_sq",
    "kl",
    "total_variation",
    "bhattacharyya",
    "info_gain",
    "StepDivergences",
    "step_divergences",
    "CumulativeTracker",
    "accumulate",
]


def hellinger_sq(p, q) -> np.ndarray | float:
    """Squared Hellinger distance ``sum (sqrt p - sqrt q)^2``, in [0, 2]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    d = np.sqrt(p) - np.sqrt(q)
    return np.sum(d * d, axis=-1)


def kl(p, q) -> np.ndarray | float:
    """KL divergence with ``0 log 0/q = 0`` and ``p log p/0 = +inf``."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * (np.log(p) - np.log(q)), 0.0)
    return np.sum(terms, axis=-1)


def total_variation(p, q) -> np.ndarray | float:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    return 0.5 * np.sum(np.abs(p - q), axis=-1)


def bhattacharyya(p, q) -> np.ndarray | float:
    """Affinity ``sum sqrt(p q)``."""
    return np.sum(np.sqrt(np.asarray(p, dtype=np.float64) * np.asarray(q, dtype=np.float64)), axis=-1)


def info_gain(s: MixtureState) -> float:
    """Posterior-weighted KL from each surviving model to the mixture.

    Reads only the mixture state, so it does not depend on which model
    generated the data.
    """
    preds = s.model_predictives()
    xi = s.predictive()
    post = s.posterior
    total = 0.0
    for i in s.survivors:
        total += post[i] * float(kl(preds[i], xi))
    return total


@dataclass(frozen=True)
class StepDivergences:
    h: float
    d: float
    c: float
    tv: float


def step_divergences(s: MixtureState, truth: int) -> StepDivergences:
    """Divergences between model ``truth`` and the mixture at the current history."""
    p = s.model_class.models[truth].predictive(s.history)
    xi = s.predictive()
    return StepDivergences(
        h=float(hellinger_sq(p, xi)),
        d=float(kl(p, xi)),
        c=info_gain(s),
        tv=float(total_variation(p, xi)),
    )


@dataclass
class CumulativeTracker:
    """Truncated sums D_T, H_T, C_T and the running sup of log(xi/mu)."""

    D: float = 0.0
    H: float = 0.0
    C: float = 0.0
    T: int = 0
    sup_log_z: float = -math.inf

    def accumulate(self, sd: StepDivergences, log_z: float) -> "CumulativeTracker":
        self.D += sd.d
        self.H += sd.h
        self.C += sd.c
        self.T += 1
        self.sup_log_z = max(self.sup_log_z, log_z)
        return self


def accumulate(tr: CumulativeTracker, sd: StepDivergences, log_z: float) -> CumulativeTracker:
    return tr.accumulate(sd, log_z)
