"""Seeded Monte Carlo experiments and their aggregate reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..confidence import ConfidenceParams, PlausibleSet, d_hat, h_hat, hoeffding_f, hoeffding_g
from ..divergence import CumulativeTracker, step_divergences
from ..measures import draw_symbol, run_rng
from ..mixture import ModelClass, new_mixture
from ..simulate import SimulationResult, simulate
from .classes import ClassSpec, resolve_class

__all__ = [
    "ExperimentConfig",
    "RunTrace",
    "trace_run",
    "AggregateReport",
    "aggregate",
    "run_appendix_experiment",
    "CSV_HEADER",
    "QUANTILE_LEVEL",
    "quantile_order_statistic",
]

CSV_HEADER = ("t", "q90_h", "mean_h_hat", "f_t", "g_t", "mean_h", "mean_d_hat")
QUANTILE_LEVEL = 0.9
QUANTILE_CONVENTION = "order statistic ceil(0.9*N) (1-based) of the sorted per-run values"


@dataclass
class ExperimentConfig:
    class_name: str = "appendix"
    truth: int | None = None
    delta: float = 0.1
    epsilon: float = 0.05
    horizon: int = 300
    runs: int = 20000
    seed: int = 1
    out: str | None = None
    w_mu_assumed: float | None = None
    t_offset: int = 1
    scale: str = "distance"
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1 or self.horizon < 1:
            raise ValueError("runs and horizon must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.t_offset not in (0, 1):
            raise ValueError("t_offset must be 0 or 1")
        if self.scale not in ("distance", "squared"):
            raise ValueError("scale must be 'distance' or 'squared'")

    def resolve(self) -> ClassSpec:
        spec = resolve_class(self.class_name)
        if self.truth is not None:
            if not 0 <= self.truth < spec.model_class.size:
                raise ValueError(f"truth index {self.truth} out of range for {spec.name}")
            spec = ClassSpec(spec.name, spec.model_class, self.truth)
        return spec


@dataclass
class RunTrace:
    """Per-step realisations along one sampled sequence (before each symbol is seen)."""

    h: np.ndarray
    d: np.ndarray
    c: np.ndarray
    h_hat: np.ndarray
    d_hat: np.ndarray
    log_z: np.ndarray
    symbols: list[int]
    totals: CumulativeTracker


def trace_run(model_class: ModelClass, truth: int, seed, horizon: int, delta: float,
              w_mu_assumed: float | None = None) -> RunTrace:
    """Single-run reference path built from the scalar library objects.

    Uses the same random stream as run ``i`` of :func:`simulate` when
    ``seed == (master_seed, i)``.
    """
    params = ConfidenceParams.for_class(model_class, delta, w_mu_assumed)
    mu = model_class.models[truth]
    u = run_rng(seed).random(horizon)
    s = new_mixture(model_class)
    ps = PlausibleSet.full(model_class, params)
    tracker = CumulativeTracker()
    cols = {k: np.empty(horizon) for k in ("h", "d", "c", "h_hat", "d_hat", "log_z")}
    for t in range(horizon):
        ps.update(s)
        sd = step_divergences(s, truth)
        log_z = s.log_mix_seq - s.log_model_seq[truth]
        tracker.accumulate(sd, log_z)
        cols["h"][t], cols["d"][t], cols["c"][t] = sd.h, sd.d, sd.c
        cols["h_hat"][t] = h_hat(ps, s)
        cols["d_hat"][t] = d_hat(s, params)
        cols["log_z"][t] = log_z
        s.observe(draw_symbol(mu.predictive(s.history), u[t]))
    tracker.sup_log_z = max(tracker.sup_log_z, s.log_mix_seq - s.log_model_seq[truth])
    return RunTrace(symbols=list(s.history), totals=tracker, **cols)


def quantile_order_statistic(values: np.ndarray, level: float = QUANTILE_LEVEL, axis: int = 0) -> np.ndarray:
    """The ``ceil(level * N)``-th smallest value (1-based) along ``axis``."""
    n = values.shape[axis]
    k = max(int(math.ceil(level * n)) - 1, 0)
    return np.take(np.sort(values, axis=axis), k, axis=axis)


@dataclass
class AggregateReport:
    rows: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)

    def csv_text(self) -> str:
        lines = [",".join(CSV_HEADER)]
        for i in range(len(self.rows["t"])):
            vals = [str(int(self.rows["t"][i]))]
            vals += [_fmt(self.rows[k][i]) for k in CSV_HEADER[1:]]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.csv_text())
        meta = dict(self.metadata)
        meta["verdicts"] = [v.as_dict() for v in self.verdicts]
        path.with_suffix(".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        return path


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.6f}"


def aggregate(result: SimulationResult, rows: int, t_offset: int, delta: float,
              scale: str = "distance") -> AggregateReport:
    """Per-row statistics from traces ``h``, ``h_hat`` and ``d_hat``.

    Row ``r`` holds the quantities computed after ``r + t_offset`` observations.
    On the distance scale the Hellinger columns are square roots of the squared
    Hellinger quantities.  ``mean_h_hat`` averages over runs whose plausible
    set is non-empty at that step.
    """
    steps = np.arange(rows) + t_offset
    h = result.traces["h"][:, steps]
    hh = result.traces["h_hat"][:, steps]
    dh = result.traces["d_hat"][:, steps]
    tf = np.sqrt if scale == "distance" else (lambda x: x)

    finite = np.isfinite(hh)
    nonempty = finite.sum(axis=0)
    hh_sum = np.sum(np.where(finite, tf(np.where(finite, hh, 0.0)), 0.0), axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean_hh = np.where(nonempty > 0, hh_sum / nonempty, np.inf)

    f = np.array([hoeffding_f(int(n), delta) if n > 0 else math.inf for n in steps])
    g = np.array([hoeffding_g(int(n), delta) if n > 0 else math.inf for n in steps])
    table = {
        "t": np.arange(rows),
        "q90_h": tf(quantile_order_statistic(h)),
        "mean_h_hat": mean_hh,
        "f_t": f,
        "g_t": g,
        "mean_h": np.mean(tf(h), axis=0),
        "mean_d_hat": np.mean(dh, axis=0),
    }
    meta = {
        "t_offset": t_offset,
        "row_meaning": f"row r = state after r + {t_offset} observations, before the next symbol",
        "scale": scale,
        "quantile": QUANTILE_CONVENTION,
        "mean_h_hat": "mean over runs with a non-empty plausible set",
        "empty_plausible_runs": (result.runs - nonempty).tolist(),
        "f_g_time": "number of observations behind the row",
    }
    return AggregateReport(table, meta)


def run_appendix_experiment(cfg: ExperimentConfig) -> AggregateReport:
    """Table of mean h_hat and the 90% quantile of h against the Hoeffding radii.

    Defaults reproduce the 41-coin experiment: theta_k = k/40, truth k = 20,
    delta = 0.1.  Also checks T1-T6 and the supermartingale lemma on the same
    runs.
    """
    from .verify import simulation_checks

    spec = cfg.resolve()
    result = simulate(
        spec.model_class, spec.truth, cfg.horizon + cfg.t_offset, cfg.runs, cfg.seed, cfg.delta,
        cfg.w_mu_assumed, record=("h", "h_hat", "d_hat"), workers=cfg.workers,
    )
    report = aggregate(result, cfg.horizon, cfg.t_offset, cfg.delta, cfg.scale)
    report.metadata.update(
        {
            "class": spec.name,
            "models": [repr(m) for m in spec.model_class.models],
            "truth": spec.truth,
            "delta": cfg.delta,
            "runs": cfg.runs,
            "horizon": cfg.horizon,
            "seed": cfg.seed,
            "simulated_steps": cfg.horizon + cfg.t_offset,
            "w_mu_assumed": cfg.w_mu_assumed,
        }
    )
    report.verdicts = simulation_checks(result, spec, cfg.delta, cfg.w_mu_assumed)
    if cfg.out:
        report.write(cfg.out)
    return report
