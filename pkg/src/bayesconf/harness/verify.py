"""Monte Carlo checks of the convergence, concentration and confidence results.

Probabilistic checks pass when the statistic is at most the bound plus three
Monte Carlo standard errors.  Infinite sums are truncated at the horizon;
every summand is non-negative, so truncation can only help an upper-bound
check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kwik import KwikConfig, bot_bound, kwik_batch
from ..mixture import prior_entropy
from ..simulate import SimulationResult, simulate
from .classes import ClassSpec
from .exact import brute_force_expectation
from .experiment import ExperimentConfig, quantile_order_statistic

__all__ = [
    "UnknownTheoremId",
    "Verdict",
    "THEOREM_IDS",
    "simulation_checks",
    "kwik_checks",
    "oracle_checks",
    "verify_theorem",
    "format_verdicts",
]

SIGMAS = 3.0
THEOREM_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "LSM")


class UnknownTheoremId(ValueError):
    pass


@dataclass
class Verdict:
    id: str
    statistic: float
    bound: float
    stderr: float
    verdict: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict != "FAIL"

    def line(self) -> str:
        return f"{self.id}\t{self.statistic:.6g}\t{self.bound:.6g}\t{self.stderr:.3g}\t{self.verdict}"

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("id", "statistic", "bound", "stderr", "verdict", "note")}


def _mean_check(cid, values, bound, note=""):
    values = np.asarray(values, dtype=np.float64)
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    ok = mean <= bound + SIGMAS * se
    return Verdict(cid, mean, bound, se, "PASS" if ok else "FAIL", note)


def _frac_check(cid, events, delta, note=""):
    events = np.asarray(events, dtype=bool)
    frac = float(events.mean())
    se = math.sqrt(delta * (1 - delta) / events.size)
    ok = frac <= delta + SIGMAS * se
    return Verdict(cid, frac, delta, se, "PASS" if ok else "FAIL", note)


def simulation_checks(result: SimulationResult, spec: ClassSpec, delta: float,
                      w_mu_assumed: float | None = None, ids=None) -> list[Verdict]:
    """Checks T1-T8 and LSM on one simulation of ``spec``'s truth."""
    mc = spec.model_class
    k = mc.size
    w_mu = float(mc.prior[spec.truth])
    ent = prior_entropy(mc)
    trunc = f"sums truncated at T={result.horizon}"
    ids = set(ids or THEOREM_IDS)
    out: list[Verdict] = []

    if "T1" in ids:
        out.append(_mean_check("T1:D", result.D, math.log(1 / w_mu), trunc))
        gap = result.D - result.H
        ok = result.H.mean() <= result.D.mean() and bool(np.all(gap >= -1e-12 * np.maximum(result.D, 1)))
        out.append(Verdict("T1:H<=D", float(result.H.mean()), float(result.D.mean()), 0.0,
                           "PASS" if ok else "FAIL", "holds run by run"))
    if "T2" in ids:
        bound = math.log(1 / w_mu) + 2 * math.log(1 / delta)
        out.append(_frac_check("T2", result.H > bound, delta, f"fraction of runs with H_T > {bound:.6g}"))
    if "T3" in ids:
        bound = math.e * math.log(6 / delta) * (math.log(2 / delta) + math.log(1 / w_mu))
        out.append(_frac_check("T3", result.D > bound, delta, f"fraction of runs with D_T > {bound:.6g}"))
    if "T4" in ids:
        out.append(_mean_check("T4", result.C, ent / w_mu, trunc))
    if "T5" in ids:
        bound = 6 * math.log(k) ** 2 + 14 * math.log(k) + 8
        if mc.is_uniform:
            out.append(_mean_check("T5", result.C, bound, trunc))
        else:
            out.append(Verdict("T5", float(result.C.mean()), bound, 0.0, "SKIP", "needs a uniform prior"))
    if "T6" in ids:
        note = "" if w_mu_assumed in (None, w_mu) else f"w_mu_assumed={w_mu_assumed} differs from w_mu={w_mu}"
        out.append(_frac_check("T6:h", result.h_violation, delta, note or "exists t with h_t > h_hat_t"))
        out.append(_frac_check("T6:d", result.d_violation, delta, note or "exists t with d_t > d_hat_t"))
        out.append(_frac_check("T6:eject", result.truth_ejected, delta, note or "truth leaves the plausible set"))
    if "T7" in ids:
        out.append(_mean_check("T7", result.sum_d_hat, ent / (delta * w_mu**2), trunc))
    if "T8" in ids:
        bound = 2 / w_mu * (math.log(1 / w_mu) + math.log(1 / delta) + ent)
        out.append(_mean_check("T8", result.sum_h_hat_nonempty, bound,
                               trunc + "; steps with an empty plausible set contribute 0"))
    if "LSM" in ids:
        out.append(_frac_check("LSM", result.sup_log_z >= math.log(1 / delta), delta,
                               "fraction of runs with sup xi/mu >= 1/delta"))
    return out


def kwik_checks(spec: ClassSpec, epsilon: float, delta: float, runs: int, horizon: int, seed: int) -> list[Verdict]:
    if not spec.model_class.is_uniform:
        return [Verdict("T9", math.nan, math.nan, math.nan, "SKIP", "the KWIK learner needs a uniform prior")]
    cfg = KwikConfig(epsilon, delta, spec.model_class)
    outcome = kwik_batch(cfg, spec.truth, runs, seed, horizon)
    k = spec.model_class.size
    verdicts = [_frac_check("T9:fail", outcome.failed, delta, "fraction of failed runs")]
    q = float(quantile_order_statistic(outcome.bot_count.astype(np.float64), 1 - delta))
    unit = bot_bound(k, epsilon, delta, 1.0)
    fitted = q / unit
    verdicts.append(Verdict("T9:bot", q, unit, float("nan"), "PASS" if math.isfinite(q) else "FAIL",
                            f"(1-delta)-quantile of bot count within horizon {horizon}; "
                            f"bound shown with C=1, fitted C={fitted:.6g}"))
    ok_runs = ~outcome.failed
    tv = float(outcome.max_tv[ok_runs].max()) if ok_runs.any() else 0.0
    eps1 = math.sqrt(epsilon)
    verdicts.append(Verdict("T9:tv", tv, eps1, 0.0, "PASS" if tv <= eps1 else "FAIL",
                            "max total variation on predicting steps of non-failed runs"))
    return verdicts


def oracle_checks(spec: ClassSpec, n: int, runs: int, seed: int, delta: float = 0.1) -> list[Verdict]:
    """Exact expectations over ``n`` steps against Monte Carlo means of the same sums.

    The Monte Carlo mean passes when within three standard errors of the
    exact value (plus 1e-9 for deterministic truths, whose runs all agree).
    """
    exact = brute_force_expectation(spec.model_class, spec.truth, n)
    result = simulate(spec.model_class, spec.truth, n, runs, seed, delta)
    out = []
    for key, values in (("D", result.D), ("H", result.H), ("C", result.C)):
        mean = float(values.mean())
        se = float(values.std(ddof=1) / math.sqrt(runs)) if runs > 1 else 0.0
        target = exact[f"E_{key}"]
        ok = abs(mean - target) <= SIGMAS * se + 1e-9
        out.append(Verdict(f"oracle:E_{key}", mean, target, se, "PASS" if ok else "FAIL",
                           f"Monte Carlo mean vs exact enumeration over n={n}"))
    bound = math.log(1 / float(spec.model_class.prior[spec.truth]))
    # deterministic truths attain the bound, so allow float rounding
    ok = exact["E_D"] <= bound * (1 + 1e-12)
    out.append(Verdict("oracle:E_D<=ln(1/w)", exact["E_D"], bound, 0.0,
                       "PASS" if ok else "FAIL", "exact, up to float rounding"))
    return out


def verify_theorem(theorem_id: str, cfg: ExperimentConfig) -> list[Verdict]:
    """Run the check(s) for ``theorem_id`` (or ``all``) under ``cfg``."""
    ids = THEOREM_IDS if theorem_id == "all" else (theorem_id,)
    for i in ids:
        if i not in THEOREM_IDS:
            raise UnknownTheoremId(f"unknown theorem id {theorem_id!r}; choose from {', '.join(THEOREM_IDS)} or all")
    spec = cfg.resolve()
    out: list[Verdict] = []
    sim_ids = [i for i in ids if i != "T9"]
    if sim_ids:
        result = simulate(spec.model_class, spec.truth, cfg.horizon, cfg.runs, cfg.seed, cfg.delta,
                          cfg.w_mu_assumed, workers=cfg.workers)
        out += simulation_checks(result, spec, cfg.delta, cfg.w_mu_assumed, sim_ids)
    if "T9" in ids:
        out += kwik_checks(spec, cfg.epsilon, cfg.delta, cfg.runs, cfg.horizon, cfg.seed)
    return out


def format_verdicts(verdicts: list[Verdict]) -> str:
    lines = ["# id\tstatistic\tbound\tstderr\tverdict  (probabilistic checks: bound + 3 stderr)"]
    for v in verdicts:
        lines.append(v.line())
        if v.note:
            lines.append(f"#   {v.id}: {v.note}")
    return "\n".join(lines)
