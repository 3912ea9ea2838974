"""Exact (non-random) checks: the two lower-bound constructions and an enumeration oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..divergence import hellinger_sq, info_gain, kl
from ..measures import AllOnes, Lebesgue, OnesThenZeros
from ..mixture import ModelClass, logsumexp, new_mixture

__all__ = [
    "InstanceTooLarge",
    "Prop1Result",
    "Prop2Result",
    "check_prop1",
    "check_prop2",
    "prop1_formula",
    "brute_force_expectation",
    "ORACLE_LIMIT",
]

ORACLE_LIMIT = 2**20


class InstanceTooLarge(ValueError):
    pass


def prop1_formula(delta: float, w: float) -> float:
    """Lower bound on the KL sum for the two-model (uniform, all-ones) class."""
    ld = math.log(1 / delta)
    return ld * (ld + 2 * math.log((1 - w) / w) - 3 * math.log(2)) / (4 * math.log(2))


@dataclass
class Prop1Result:
    delta: float
    n: int
    partial_sum: float
    formula: float
    prefix_prob: float
    terms: list[float] = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.partial_sum > self.formula and self.prefix_prob >= self.delta

    def line(self) -> str:
        return f"prop1\t{self.partial_sum:.6g}\t{self.formula:.6g}\t0\t{'PASS' if self.passed else 'FAIL'}"


def check_prop1(delta: float, w: float) -> Prop1Result:
    """Sum of KL(uniform || mixture) along the all-ones prefix, n + 1 terms.

    The class is {Lebesgue, AllOnes} with prior (w, 1 - w) and the uniform
    measure is the truth.
    """
    if not 0 < delta < 1 or not 0 < w < 1:
        raise ValueError("delta and w must lie in (0, 1)")
    n = int(math.floor(math.log(1 / delta) / math.log(2)))
    mc = ModelClass([Lebesgue(2), AllOnes()], [w, 1 - w])
    s = new_mixture(mc)
    mu = mc.models[0]
    terms = []
    for _ in range(n + 1):
        terms.append(float(kl(mu.predictive(s.history), s.predictive())))
        s.observe(1)
    total = math.fsum(terms)
    return Prop1Result(delta, n, total, prop1_formula(delta, w), 2.0**-n, terms)


@dataclass
class Prop2Result:
    K: int
    C_exact: float
    lower: float
    upper: float
    c_terms: list[float] = field(repr=False)
    xi_ones: list[float] = field(repr=False)
    xi_zero_given_ones: list[float] = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.lower < self.C_exact <= self.upper

    def line(self) -> str:
        return f"prop2[K={self.K}]\t{self.C_exact:.6g}\t{self.upper:.6g}\t0\t{'PASS' if self.passed else 'FAIL'}"


def check_prop2(K: int, margin: int = 5) -> Prop2Result:
    """Exact information-gain sum for ones-then-zeros models k = 0..K-1, truth k = K-1.

    ``xi_ones[t]`` is xi(1^t) and ``xi_zero_given_ones[t]`` is xi(0 | 1^t) for t < K.
    """
    if K < 2:
        raise ValueError("K must be at least 2")
    mc = ModelClass([OnesThenZeros(k) for k in range(K)])
    s = new_mixture(mc)
    truth = mc.models[K - 1]
    c_terms, xi_ones, xi_zero = [], [], []
    for t in range(K + margin):
        c_terms.append(info_gain(s))
        if t < K:
            xi_ones.append(math.exp(s.log_mix_seq))
            xi_zero.append(float(s.predictive()[0]))
        s.observe(int(np.argmax(truth.predictive(s.history))))
    lk = math.log(K)
    return Prop2Result(
        K, math.fsum(c_terms), 0.5 * lk**2 - 1, 6 * lk**2 + 14 * lk + 8, c_terms, xi_ones, xi_zero
    )


def brute_force_expectation(model_class: ModelClass, truth: int, n: int) -> dict[str, float]:
    """Exact ``E[D_n]``, ``E[H_n]``, ``E[C_n]`` by enumerating every history.

    Walks the tree of strings shorter than ``n``.  At each node ``x`` the
    mixture is formed directly from ``xi(x) = sum_nu w_nu nu(x)`` rather than
    from accumulated conditionals, and each step's divergences are weighted by
    the truth's probability of ``x``.  Strings the truth cannot produce carry
    weight zero and are skipped.
    """
    a = model_class.alphabet_size
    if n < 0:
        raise ValueError("n must be non-negative")
    if a**n > ORACLE_LIMIT:
        raise InstanceTooLarge(f"{a}^{n} strings exceeds the enumeration limit {ORACLE_LIMIT}")
    log_w = model_class.log_prior
    models = model_class.models
    totals = {"D": 0.0, "H": 0.0, "C": 0.0}

    def visit(x: list[int], log_nu: np.ndarray):
        if len(x) == n:
            return
        log_joint = log_w + log_nu
        post = np.exp(log_joint - logsumexp(log_joint))
        live = np.flatnonzero(post > 0)
        preds = np.stack([models[i].predictive(x) for i in live])
        xi = post[live] @ preds
        p_mu = models[truth].predictive(x)
        weight = math.exp(log_nu[truth])
        totals["D"] += weight * float(kl(p_mu, xi))
        totals["H"] += weight * float(hellinger_sq(p_mu, xi))
        totals["C"] += weight * float(post[live] @ kl(preds, xi))
        for sym in range(a):
            if p_mu[sym] == 0.0:
                continue
            nxt = np.full_like(log_nu, -np.inf)
            with np.errstate(divide="ignore"):
                nxt[live] = log_nu[live] + np.log(preds[:, sym])
            visit(x + [sym], nxt)

    visit([], np.zeros(model_class.size))
    return {"E_D": totals["D"], "E_H": totals["H"], "E_C": totals["C"]}
