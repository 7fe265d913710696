"""Command-line entry point: ``mixedfca {mine,lattice,tune,experiment}``."""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import tempfile

from .context import read_context
from .errors import MixedFCAError
from .experiments import emit_report, sweep
from .mining import mine_implications, mine_lattice
from .tuner import CANDIDATE_MODES, TuningReport, load_problem, tune


def _write(path: str | None, text: str) -> None:
    """Write atomically so a failed run never leaves a partial file behind."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mixedfca-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_mine(args) -> None:
    ctx = read_context(args.input)
    sigma = mine_implications(ctx)
    if args.format == "json":
        text = sigma.to_json(ctx.attributes)
    else:
        text = sigma.to_text(ctx.attributes)
    _write(args.output, text)


def cmd_lattice(args) -> None:
    ctx = read_context(args.input)
    lattice = mine_lattice(ctx)
    if args.format == "text":
        text = "".join(ctx.format(c.intent) + "\n" for c in lattice.concepts)
    else:
        text = lattice.to_json()
    _write(args.output, text)


def cmd_tune(args) -> None:
    problem = load_problem(args.input)
    overrides = {}
    if args.max_iterations is not None:
        overrides["max_iterations"] = args.max_iterations
    if args.candidate_mode is not None:
        overrides["candidate_mode"] = args.candidate_mode
    problem = dataclasses.replace(problem, **overrides)
    report = tune(problem)
    _write(args.output, report.to_json())
    tsv = TuningReport.TSV_HEADER + "\n" + report.to_tsv_row() + "\n"
    if args.tsv_output:
        _write(args.tsv_output, tsv)
    else:
        sys.stdout.write(tsv)


def cmd_experiment(args) -> None:
    if args.trials < 1:
        raise MixedFCAError("--trials must be at least 1")
    rows = sweep(
        args.experiment,
        ks=args.k,
        gs=args.g,
        targets=args.target,
        trials=args.trials,
        base_seed=args.seed,
        max_iterations=args.max_iterations,
        candidate_mode=args.candidate_mode,
    )
    _write(args.output, emit_report(rows, args.experiment, args.format))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedfca",
        description="Mixed (positive/negative) formal concept analysis and lattice-guided tuning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine mixed implications from a context CSV")
    p.add_argument("--input", required=True, help="context CSV file")
    p.add_argument("--output", default="-", help="output file (default: stdout)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("lattice", help="mine the mixed concept lattice of a context CSV")
    p.add_argument("--input", required=True, help="context CSV file")
    p.add_argument("--output", default="-", help="output file (default: stdout)")
    p.add_argument(
        "--format", choices=("json", "text"), default="json",
        help="json: nodes and cover edges; text: one intent per line",
    )
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("tune", help="run the tuner on a JSON problem file")
    p.add_argument("--input", required=True, help="problem JSON file")
    p.add_argument("--output", default="-", help="report JSON file (default: stdout)")
    p.add_argument("--tsv-output", help="also write the one-row TSV summary here")
    p.add_argument("--max-iterations", type=int, help="override the problem's iteration cap")
    p.add_argument("--candidate-mode", choices=CANDIDATE_MODES, help="override candidate scheme")
    p.add_argument(
        "--seed", type=int, default=0,
        help="accepted for interface parity; tuning itself draws no random numbers",
    )
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("experiment", help="run a synthetic experiment sweep")
    p.add_argument("experiment", choices=("exp1", "exp2"))
    p.add_argument("--k", type=int, nargs="+", help="control group sizes (default: full sweep)")
    p.add_argument("--g", type=int, nargs="+", help="numbers of configurations (default: full sweep)")
    p.add_argument("--target", type=float, nargs="+", help="exp1 objective targets (default: all three)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    p.add_argument("--max-iterations", type=int, default=50)
    p.add_argument("--candidate-mode", choices=CANDIDATE_MODES, default="averages")
    p.add_argument("--output", default="-", help="report file (default: stdout)")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (MixedFCAError, OSError) as exc:
        print(f"mixedfca {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
