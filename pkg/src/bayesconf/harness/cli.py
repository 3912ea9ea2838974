"""Command line entry point.

    bayesconf experiment appendix --runs 20000 --horizon 300 --seed 1 --out table.csv
    bayesconf verify T2 --class appendix --runs 5000 --delta 0.1
    bayesconf check prop2 --k 41
    bayesconf oracle --class fix-c --horizon 8 --runs 100000

Exit status is 0 when every check passes, 1 on any FAIL and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .exact import InstanceTooLarge, check_prop1, check_prop2
from .experiment import ExperimentConfig, run_appendix_experiment
from .verify import THEOREM_IDS, UnknownTheoremId, format_verdicts, oracle_checks, verify_theorem

__all__ = ["main", "cli_main", "build_parser"]

DEFAULT_RUNS = {"experiment": 20000, "verify": 5000, "check": 0, "oracle": 100000}
DEFAULT_HORIZON = {"experiment": 300, "verify": 300, "check": 0, "oracle": 8}
DEFAULT_CLASS = {"experiment": "appendix", "verify": "appendix", "check": "appendix", "oracle": "fix-c"}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--runs", type=int, default=None, help="number of Monte Carlo runs")
    p.add_argument("--horizon", type=int, default=None, help="steps per run (oracle: string length n)")
    p.add_argument("--seed", type=int, default=1, help="master seed")
    p.add_argument("--delta", type=float, default=0.1, help="confidence parameter")
    p.add_argument("--epsilon", type=float, default=0.05, help="KWIK accuracy (squared Hellinger)")
    p.add_argument("--out", default=None, help="output file")
    p.add_argument("--t-offset", type=int, choices=(0, 1), default=1, help="observations before table row 0")
    p.add_argument("--class", dest="class_name", default=None, help="preset name or class file")
    p.add_argument("--truth", type=int, default=None, help="index of the true model")
    p.add_argument("--w-mu", type=float, default=None, help="assumed prior weight of the truth")
    p.add_argument("--scale", choices=("distance", "squared"), default="distance",
                   help="Hellinger columns as distances or squared distances")
    p.add_argument("--workers", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bayesconf", description="Bayes mixture confidence bounds toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("experiment", help="seeded Monte Carlo table")
    p.add_argument("name", choices=("appendix",))
    _common(p)

    p = sub.add_parser("verify", help="Monte Carlo theorem checks")
    p.add_argument("id", help=f"one of {', '.join(THEOREM_IDS)} or all")
    _common(p)

    p = sub.add_parser("check", help="exact lower-bound constructions")
    p.add_argument("which", choices=("prop1", "prop2"))
    p.add_argument("--k", type=int, default=41, help="class size for prop2")
    p.add_argument("--w", type=float, default=0.5, help="prior weight of the uniform model for prop1")
    _common(p)

    p = sub.add_parser("oracle", help="exact expectations by enumeration, compared with Monte Carlo")
    _common(p)
    return parser


def _config(args, command: str) -> ExperimentConfig:
    return ExperimentConfig(
        class_name=args.class_name or DEFAULT_CLASS[command],
        truth=args.truth,
        delta=args.delta,
        epsilon=args.epsilon,
        horizon=args.horizon if args.horizon is not None else DEFAULT_HORIZON[command],
        runs=args.runs if args.runs is not None else DEFAULT_RUNS[command],
        seed=args.seed,
        out=args.out,
        w_mu_assumed=args.w_mu,
        t_offset=args.t_offset,
        scale=args.scale,
        workers=args.workers,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _run(args) -> int:
    if args.command == "experiment":
        cfg = _config(args, "experiment")
        report = run_appendix_experiment(cfg)
        if not cfg.out:
            sys.stdout.write(report.csv_text())
        print(format_verdicts(report.verdicts), file=sys.stderr)
        return 0 if all(v.passed for v in report.verdicts) else 1

    if args.command == "verify":
        cfg = _config(args, "verify")
        verdicts = verify_theorem(args.id, cfg)
        _emit(format_verdicts(verdicts), cfg.out)
        return 0 if all(v.passed for v in verdicts) else 1

    if args.command == "check":
        if args.which == "prop1":
            res = check_prop1(args.delta, args.w)
            detail = f"#   n={res.n}  prefix probability 2^-n={res.prefix_prob:.6g}  terms={[round(x, 6) for x in res.terms]}"
        else:
            res = check_prop2(args.k)
            detail = f"#   lower bound {res.lower:.6g} < C_exact required"
        text = "\n".join(["# id\tstatistic\tbound\tstderr\tverdict  (exact)", res.line(), detail])
        _emit(text, args.out)
        return 0 if res.passed else 1

    cfg = _config(args, "oracle")
    spec = cfg.resolve()
    verdicts = oracle_checks(spec, cfg.horizon, cfg.runs, cfg.seed, cfg.delta)
    _emit(format_verdicts(verdicts), cfg.out)
    return 0 if all(v.passed for v in verdicts) else 1


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return _run(args)
    except (ValueError, UnknownTheoremId, InstanceTooLarge, OSError) as exc:
        print(f"bayesconf: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
