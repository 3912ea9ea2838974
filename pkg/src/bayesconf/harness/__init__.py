"""Experiment driver, theorem checks, exact oracles and the command line."""

from .classes import PRESETS, ClassSpec, bernoulli_grid, parse_class_file, resolve_class
from .exact import InstanceTooLarge, brute_force_expectation, check_prop1, check_prop2, prop1_formula
from .experiment import (
    CSV_HEADER,
    AggregateReport,
    ExperimentConfig,
    RunTrace,
    aggregate,
    quantile_order_statistic,
    run_appendix_experiment,
    trace_run,
)
from .verify import THEOREM_IDS, UnknownTheoremId, Verdict, format_verdicts, oracle_checks, verify_theorem

__all__ = [
    "PRESETS",
    "ClassSpec",
    "bernoulli_grid",
    "parse_class_file",
    "resolve_class",
    "InstanceTooLarge",
    "brute_force_expectation",
    "check_prop1",
    "check_prop2",
    "prop1_formula",
    "CSV_HEADER",
    "AggregateReport",
    "ExperimentConfig",
    "RunTrace",
    "aggregate",
    "quantile_order_statistic",
    "run_appendix_experiment",
    "trace_run",
    "THEOREM_IDS",
    "UnknownTheoremId",
    "Verdict",
    "format_verdicts",
    "oracle_checks",
    "verify_theorem",
]
