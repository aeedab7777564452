"""Command-line surface: CSV/JSON tables for plotting and regression tests.

Data goes to stdout (or --out), diagnostics to stderr. Exit codes: 0 on
success, 1 on a computation error, 2 on a usage error.
"""
import argparse
import csv
import io
import json
import logging
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from apsums import commands, config
from apsums.errors import ApsumsError, InvalidArgument, UsageError

logger = logging.getLogger(__name__)

COMMANDS = ("primes", "sum", "predict", "compare", "conditions")


@dataclass(frozen=True)
class RunConfig:
    command: str
    k: int
    l: int
    x: float | None = None
    x_min: float = config.DEFAULT_X_MIN
    x_max: float = config.DEFAULT_X_MAX
    x_points: int = config.DEFAULT_X_POINTS
    f_text: str | None = None
    model: str | None = None
    c: float = config.DEFAULT_C
    theta: float = config.DEFAULT_THETA
    tol: float = config.DEFAULT_TOL
    format: str = "csv"
    out: Path | None = None
    workers: int = 1
    with_ratio: bool = False

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise InvalidArgument(f"unknown command {self.command!r}")
        if self.workers < 1:
            raise InvalidArgument(f"--workers must be >= 1, got {self.workers}")
        commands.validate_knobs(self.c, self.theta, self.tol)
        if self.command in ("primes", "sum", "predict"):
            if self.x is None:
                raise InvalidArgument(f"{self.command} needs --x")
            commands.validate_bound(self.x)
        if self.command != "primes" and not self.f_text:
            raise InvalidArgument(f"{self.command} needs --f")
        if self.command == "predict":
            commands.parse_model(self.model or "", allow_all=True)
        if self.command == "compare":
            commands.parse_model(self.model or "")
            commands.validate_grid(self.x_min, self.x_max, self.x_points)
        return self

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            k=args.k,
            l=args.l,
            x=getattr(args, "x", None),
            x_min=getattr(args, "x_min", config.DEFAULT_X_MIN),
            x_max=getattr(args, "x_max", config.DEFAULT_X_MAX),
            x_points=getattr(args, "x_points", config.DEFAULT_X_POINTS),
            f_text=getattr(args, "f", None),
            model=getattr(args, "model", None),
            c=getattr(args, "c", config.DEFAULT_C),
            theta=getattr(args, "theta", config.DEFAULT_THETA),
            tol=getattr(args, "tol", config.DEFAULT_TOL),
            format=args.format,
            out=args.out,
            workers=args.workers,
            with_ratio=getattr(args, "with_ratio", False),
        ).validate()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    common.add_argument("--workers", type=int, default=1, help="sieve threads")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", type=Path, default=None, help="write to a file instead of stdout")
    common.add_argument("--k", type=int, required=True, help="modulus")
    common.add_argument("--l", type=int, required=True, help="residue, coprime to k")

    model_knobs = argparse.ArgumentParser(add_help=False)
    model_knobs.add_argument("--c", type=float, default=config.DEFAULT_C, help="remainder constant c > 0")
    model_knobs.add_argument("--theta", type=float, default=config.DEFAULT_THETA, help="Vinogradov exponent")
    model_knobs.add_argument("--tol", type=float, default=config.DEFAULT_TOL, help="quadrature tolerance")

    parser = argparse.ArgumentParser(
        prog="apsums",
        description="Sums of functions over primes in arithmetic progressions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    primes = sub.add_parser("primes", parents=[common], help="primes p <= x with p = l (mod k)")
    primes.add_argument("--x", type=float, required=True)

    total = sub.add_parser("sum", parents=[common], help="exact sum against its Abel form")
    total.add_argument("--f", required=True, help="weight function of t, e.g. 'log(t)'")
    total.add_argument("--x", type=float, required=True)

    prediction = sub.add_parser("predict", parents=[common, model_knobs], help="main term and envelope")
    prediction.add_argument("--f", required=True)
    prediction.add_argument("--x", type=float, required=True)
    prediction.add_argument("--model", required=True, help="coarse, pnt, vinogradov, grh or all")

    compare = sub.add_parser("compare", parents=[common, model_knobs], help="convergence table")
    compare.add_argument("--f", required=True)
    compare.add_argument("--model", required=True, help="coarse, pnt, vinogradov or grh")
    compare.add_argument("--x-min", type=float, default=config.DEFAULT_X_MIN)
    compare.add_argument("--x-max", type=float, default=config.DEFAULT_X_MAX)
    compare.add_argument("--x-points", type=int, default=config.DEFAULT_X_POINTS)

    conditions = sub.add_parser("conditions", parents=[common], help="condition report (JSON)")
    conditions.add_argument("--f", required=True)
    conditions.add_argument("--tol", type=float, default=config.DEFAULT_TOL)
    conditions.add_argument("--with-ratio", action="store_true", help="add the direct sum ratio check")
    return parser


def _number(value) -> str:
    if isinstance(value, str):
        return value
    return "%.12g" % value


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def _dump_json(payload) -> str:
    return json.dumps(_json_safe(payload), indent=2, allow_nan=False) + "\n"


def _dump_csv(columns: Sequence[str] | None, rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if columns:
        writer.writerow(columns)
    writer.writerows([_number(value) for value in row] for row in rows)
    return buffer.getvalue()


def execute(run_config: RunConfig) -> str:
    """Run one validated command and return its rendered output"""
    rc = run_config
    as_json = rc.format == "json"
    match rc.command:
        case "primes":
            record = commands.primes_record(rc.k, rc.l, rc.x, workers=rc.workers)
            if as_json:
                return _dump_json(record)
            return _dump_csv(None, [[p] for p in record["primes"]])
        case "sum":
            record = commands.sum_record(rc.f_text, rc.k, rc.l, rc.x, workers=rc.workers)
            if as_json:
                return _dump_json(record)
            return _dump_csv(commands.SUM_COLUMNS, [[record[key] for key in commands.SUM_COLUMNS]])
        case "predict":
            records = commands.predict_records(rc.f_text, rc.k, rc.l, rc.x, rc.model, rc.c, rc.theta, rc.tol)
            if as_json:
                return _dump_json(records[0] if len(records) == 1 else records)
            return _dump_csv(
                commands.PREDICT_COLUMNS,
                [[record[key] for key in commands.PREDICT_COLUMNS] for record in records],
            )
        case "compare":
            rows = commands.compare_table(
                rc.f_text, rc.k, rc.l, rc.model, rc.x_min, rc.x_max, rc.x_points,
                rc.c, rc.theta, rc.tol, workers=rc.workers,
            )
            if as_json:
                return _dump_json({"columns": list(commands.COMPARE_COLUMNS), "rows": rows})
            return _dump_csv(commands.COMPARE_COLUMNS, rows)
        case "conditions":
            report = commands.conditions_report(
                rc.f_text, rc.k, rc.l, with_ratio=rc.with_ratio, tol=rc.tol, workers=rc.workers
            )
            return _dump_json(report)
    raise InvalidArgument(f"unknown command {rc.command!r}")


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s %(message)s")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    _configure_logging(args.verbose)

    try:
        run_config = RunConfig.from_args(args)
        logger.info("[CLI] %s k=%d l=%d", run_config.command, run_config.k, run_config.l)
        output = execute(run_config)
    except ApsumsError as exc:
        print(f"apsums: error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, UsageError) else 1

    if run_config.out is None:
        sys.stdout.write(output)
        sys.stdout.flush()
    else:
        run_config.out.write_text(output, encoding="utf-8", newline="\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
