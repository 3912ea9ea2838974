"""Measures over finite alphabets.

A measure is described by its one-step conditional distributions: given a
finite history (a sequence of symbol indices) it returns the distribution of
the next symbol.  Sequence probabilities are handled in natural-log space.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "ConditioningOnNullSet",
    "Measure",
    "BernoulliMeasure",
    "CategoricalIID",
    "OnesThenZeros",
    "AllOnes",
    "Lebesgue",
    "TableMeasure",
    "predictive",
    "log_prob",
    "sample",
    "draw_symbol",
    "run_rng",
]

NORMALIZATION_TOL = 1e-12


class ConditioningOnNullSet(ValueError):
    """Raised when a measure is asked to condition on a history of probability zero."""


def _check_distribution(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("a distribution must be a non-empty vector")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError(f"distribution has negative or non-finite entries: {p}")
    if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    return p


class Measure:
    """Base class for measures on infinite sequences over ``range(alphabet_size)``.

    Subclasses implement :meth:`_predictive`.  Measures are immutable.
    """

    alphabet_size: int = 2
    #: True when the conditional never depends on the history.
    iid: bool = False
    #: True when the conditional depends only on the history length
    #: (for histories the measure can generate).
    time_only: bool = False

    def _predictive(self, history: Sequence[int]) -> np.ndarray:
        raise NotImplementedError

    def predictive(self, history: Sequence[int] = ()) -> np.ndarray:
        """Distribution of the next symbol given ``history``.

        Raises :class:`ConditioningOnNullSet` if the history has probability 0.
        """
        for a in history:
            if not 0 <= a < self.alphabet_size:
                raise ValueError(f"symbol {a} outside alphabet of size {self.alphabet_size}")
        return self._predictive(history)

    def predictive_batch(self, histories: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        """Conditionals for a batch of equal-length histories, shape ``(N, A)``.

        Rows where ``mask`` is False are not evaluated (they get the uniform
        distribution as a placeholder), so histories outside the support can be
        passed as long as they are masked out.
        """
        n = histories.shape[0]
        out = np.full((n, self.alphabet_size), 1.0 / self.alphabet_size)
        if self.iid:
            out[:] = self._predictive(())
            return out
        if self.time_only:
            # any supported history of this length has the same conditional
            out[:] = self._time_predictive(histories.shape[1])
            return out
        rows = range(n) if mask is None else np.flatnonzero(mask)
        for i in rows:
            out[i] = self._predictive(histories[i].tolist())
        return out

    def _time_predictive(self, length: int) -> np.ndarray:
        raise NotImplementedError

    def log_prob(self, history: Sequence[int]) -> float:
        """Natural log of the probability of the cylinder set of ``history``."""
        total = 0.0
        for t, a in enumerate(history):
            p = self.predictive(history[:t])[a]
            if p <= 0.0:
                return -math.inf
            total += math.log(p)
        return total

    def sample(self, seed, horizon: int) -> list[int]:
        """Draw a sequence of length ``horizon``; deterministic given ``seed``."""
        if horizon < 1:
            raise ValueError("horizon must be positive")
        uniforms = run_rng(seed).random(horizon)
        history: list[int] = []
        for u in uniforms:
            history.append(draw_symbol(self.predictive(history), u))
        return history


def run_rng(seed) -> np.random.Generator:
    """Generator for one run.

    ``seed`` may be an int or a tuple such as ``(master_seed, run_index)``;
    tuples give independent streams per run regardless of execution order.
    """
    if isinstance(seed, tuple):
        seed = list(seed)
    return np.random.default_rng(np.random.SeedSequence(seed))


def draw_symbol(probs: np.ndarray, u: float) -> int:
    """Inverse-CDF draw of one symbol using the uniform ``u``."""
    cdf = np.cumsum(probs)
    return int(min(np.searchsorted(cdf, u, side="right"), len(probs) - 1))


class CategoricalIID(Measure):
    """The same distribution ``p`` at every step."""

    iid = True

    def __init__(self, p: Sequence[float]):
        self.p = _check_distribution(p)
        self.p.setflags(write=False)
        self.alphabet_size = self.p.size

    def _predictive(self, history):
        if history and np.any(self.p[np.asarray(history)] == 0.0):
            raise ConditioningOnNullSet(f"{self!r} assigns probability 0 to {list(history)}")
        return self.p.copy()

    def __repr__(self):
        return f"CategoricalIID({self.p.tolist()})"


class BernoulliMeasure(CategoricalIID):
    """i.i.d. coin with probability ``theta`` of emitting 1."""

    def __init__(self, theta: float):
        if not 0.0 <= theta <= 1.0:
            raise ValueError("theta must lie in [0, 1]")
        self.theta = float(theta)
        super().__init__([1.0 - self.theta, self.theta])

    def __repr__(self):
        return f"BernoulliMeasure({self.theta!r})"


class Lebesgue(CategoricalIID):
    """Uniform measure: every string of length n has probability ``A**-n``."""

    def __init__(self, alphabet_size: int = 2):
        if alphabet_size < 1:
            raise ValueError("alphabet size must be positive")
        super().__init__(np.full(alphabet_size, 1.0 / alphabet_size))

    def __repr__(self):
        return f"Lebesgue({self.alphabet_size})"


class OnesThenZeros(Measure):
    """Deterministic: ``k`` ones followed by zeros forever."""

    time_only = True

    def __init__(self, k: int):
        if k < 0:
            raise ValueError("k must be non-negative")
        self.k = int(k)
        self.alphabet_size = 2

    def _time_predictive(self, length):
        return np.array([0.0, 1.0]) if length < self.k else np.array([1.0, 0.0])

    def _predictive(self, history):
        n = len(history)
        expected = [1] * min(n, self.k) + [0] * max(n - self.k, 0)
        if list(history) != expected:
            raise ConditioningOnNullSet(f"{self!r} cannot generate {list(history)}")
        return self._time_predictive(n)

    def __repr__(self):
        return f"OnesThenZeros({self.k})"


class AllOnes(Measure):
    """Deterministic infinite sequence of ones."""

    time_only = True
    alphabet_size = 2

    def _time_predictive(self, length):
        return np.array([0.0, 1.0])

    def _predictive(self, history):
        if any(a != 1 for a in history):
            raise ConditioningOnNullSet(f"AllOnes cannot generate {list(history)}")
        return np.array([0.0, 1.0])

    def __repr__(self):
        return "AllOnes()"


class TableMeasure(Measure):
    """Explicit conditional table for histories up to a fixed horizon.

    ``table`` maps history tuples to next-symbol distributions.  Every history
    of positive probability with length below ``horizon`` must be present.
    """

    def __init__(self, table: Mapping[tuple, Sequence[float]], alphabet_size: int, horizon: int):
        self.alphabet_size = int(alphabet_size)
        self.horizon = int(horizon)
        self.table = {tuple(k): _check_distribution(v) for k, v in table.items()}
        for v in self.table.values():
            if v.size != self.alphabet_size:
                raise ValueError("table entry has the wrong alphabet size")

    @classmethod
    def from_measure(cls, measure: Measure, horizon: int) -> "TableMeasure":
        """Tabulate ``measure`` on every history of positive probability."""
        table = {}
        frontier = [()]
        for _ in range(horizon):
            nxt = []
            for h in frontier:
                p = measure.predictive(h)
                table[h] = p
                nxt.extend(h + (a,) for a in range(measure.alphabet_size) if p[a] > 0)
            frontier = nxt
        return cls(table, measure.alphabet_size, horizon)

    def _predictive(self, history):
        key = tuple(history)
        if len(key) >= self.horizon:
            raise ValueError(f"history longer than table horizon {self.horizon}")
        try:
            return self.table[key].copy()
        except KeyError:
            raise ConditioningOnNullSet(f"no table entry for {list(key)}") from None

    def __repr__(self):
        return f"TableMeasure(<{len(self.table)} entries>, horizon={self.horizon})"


def predictive(m: Measure, history: Sequence[int] = ()) -> np.ndarray:
    return m.predictive(history)


def log_prob(m: Measure, history: Sequence[int]) -> float:
    return m.log_prob(history)


def sample(m: Measure, seed, horizon: int) -> list[int]:
    return m.sample(seed, horizon)
