"""
lgi-pt command-line front end.

Subcommands: sweep, k3max, corr, quarter, verify, eigen. Tables go to
stdout (or --out); every diagnostic goes to stderr.
"""
import argparse
import logging
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from app.core.config import settings
from app.core.errors import DomainError, LgiPtError
from app.core.log import configure_logging
from app.modules.correlations.schemas import ClosedFormVariant, CorrelationMethod
from app.modules.correlations.service import DEFAULT_VERIFY_ALPHA_MAX, k3, verify_closed_forms
from app.modules.pt_core.service import (
    MAX_EP_GUARD,
    MIN_EP_GUARD,
    build_hamiltonian,
    check_alpha,
    eigen_report,
    parse_angle,
)
from app.modules.scan.schemas import ScanRow, SweepConfig, TableFormat
from app.modules.scan.service import (
    DEFAULT_WINDOW_MAX,
    correlations_at_quarter_tau,
    export_table,
    sweep_k3,
    tau_min_curve,
)

logger = logging.getLogger(__name__)

PROG = "lgi-pt"
COMMANDS = ("sweep", "k3max", "corr", "quarter", "verify", "eigen")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class Command:
    """One parsed and validated invocation."""
    name: str
    args: argparse.Namespace


class UsageError(Exception):
    """Raised instead of exiting so run() controls the exit code."""

    def __init__(self, message: str, usage: str):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self.format_usage())


def _angle_list(text: str) -> List[float]:
    try:
        return [parse_angle(token) for token in text.split(",") if token.strip()]
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e))


def _angle(text: str) -> float:
    try:
        return parse_angle(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in TableFormat], default=TableFormat.CSV.value)
    parser.add_argument("--out", default=None, metavar="PATH", help="output file (default: stdout)")


def _add_method_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--method",
        choices=[m.value for m in CorrelationMethod],
        default=CorrelationMethod.SIMULATION.value,
        help="sim is the reference; closed forms must be asked for",
    )


def _add_guard_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--ep-guard",
        type=float,
        default=None,
        help=f"exceptional-point guard as a fraction of pi, in [{MIN_EP_GUARD:g}, {MAX_EP_GUARD:g})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Leggett-Garg K3 under PT-symmetric qubit dynamics")
    parser.add_argument("--log-level", default=None, help="override LGI_PT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sweep = sub.add_parser("sweep", help="K3 over an (alpha, tau) grid")
    sweep.add_argument("--alpha", type=_angle_list, required=True, help="comma list, radians or 0.25pi")
    sweep.add_argument("--tau-min", type=_angle, default=0.0)
    sweep.add_argument("--tau-max", type=_angle, default=math.pi)
    sweep.add_argument("--steps", type=int, default=256)
    _add_method_flag(sweep)
    _add_output_flags(sweep)
    _add_guard_flag(sweep)

    k3max = sub.add_parser("k3max", help="maximum of K3 over tau and its smallest maximizer")
    k3max.add_argument("--alpha", type=_angle_list, required=True)
    k3max.add_argument("--tol", type=float, default=1e-10, help="refinement tolerance in tau")
    k3max.add_argument("--window-max", type=_angle, default=DEFAULT_WINDOW_MAX,
                       help="upper end of the tau window (default pi/4; K3 is pi-periodic)")
    _add_method_flag(k3max)
    _add_output_flags(k3max)
    _add_guard_flag(k3max)

    corr = sub.add_parser("corr", help="C21, C32, C31 and K3 at one tau")
    corr.add_argument("--alpha", type=_angle_list, required=True)
    corr.add_argument("--tau", type=_angle, required=True)
    _add_method_flag(corr)
    _add_output_flags(corr)
    _add_guard_flag(corr)

    quarter = sub.add_parser("quarter", help="correlations at tau = pi/4")
    quarter.add_argument("--alpha", type=_angle_list, required=True)
    _add_method_flag(quarter)
    _add_output_flags(quarter)
    _add_guard_flag(quarter)

    verify = sub.add_parser("verify", help="closed forms against the simulation")
    verify.add_argument("--samples", type=int, default=10_000)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tol", type=float, default=1e-9)
    verify.add_argument("--alpha-max", type=_angle, default=DEFAULT_VERIFY_ALPHA_MAX)
    _add_output_flags(verify)
    _add_guard_flag(verify)

    eigen = sub.add_parser("eigen", help="eigensystem and PT diagnostics")
    eigen.add_argument("--alpha", type=_angle, required=True)
    eigen.add_argument("--s", type=float, default=1.0)
    _add_output_flags(eigen)
    _add_guard_flag(eigen)

    return parser


def _validate(args: argparse.Namespace) -> None:
    """Domain checks on parsed flags, all before any computation."""
    if args.log_level is not None and not isinstance(logging.getLevelName(args.log_level.upper()), int):
        raise DomainError(f"--log-level must be a logging level name, got {args.log_level!r}")

    guard = args.ep_guard
    if guard is not None and not MIN_EP_GUARD <= guard < MAX_EP_GUARD:
        raise DomainError(f"--ep-guard must lie in [{MIN_EP_GUARD:g}, {MAX_EP_GUARD:g}), got {guard!r}")

    alphas = args.alpha if isinstance(getattr(args, "alpha", None), list) else []
    if args.command in ("sweep", "k3max", "corr", "quarter") and not alphas:
        raise DomainError("--alpha needs at least one value")
    if args.command == "eigen":
        alphas = [args.alpha]
    for alpha in alphas:
        check_alpha(alpha, guard)

    if args.command == "sweep":
        if args.steps < 2:
            raise DomainError(f"--steps must be >= 2, got {args.steps}")
        if not args.tau_min < args.tau_max:
            raise DomainError(f"--tau-min must be < --tau-max, got {args.tau_min!r} >= {args.tau_max!r}")
    if args.command == "corr" and not args.tau > 0:
        raise DomainError(f"--tau must be > 0, got {args.tau!r}")
    if args.command in ("k3max", "verify") and not args.tol > 0:
        raise DomainError(f"--tol must be > 0, got {args.tol!r}")
    if args.command == "k3max" and not args.window_max > 0:
        raise DomainError(f"--window-max must be > 0, got {args.window_max!r}")
    if args.command == "verify":
        if args.samples < 1:
            raise DomainError(f"--samples must be >= 1, got {args.samples}")
        check_alpha(args.alpha_max, guard)
    if args.command == "eigen" and args.s == 0:
        raise DomainError("--s must be non-zero")


def parse_flags(argv: Sequence[str]) -> Command:
    """
    Parse and validate argv.

    Raises:
        UsageError: unknown, missing or malformed flags
        DomainError: well-formed flags outside the valid domain
    """
    parser = build_parser()
    args = parser.parse_args(list(argv))
    _validate(args)
    return Command(name=args.command, args=args)


def _execute(command: Command) -> int:
    args = command.args
    fmt = TableFormat(args.format)
    method = CorrelationMethod(getattr(args, "method", CorrelationMethod.SIMULATION.value))

    if command.name == "sweep":
        config = SweepConfig(
            alphas=args.alpha,
            tau_min=args.tau_min,
            tau_max=args.tau_max,
            tau_steps=args.steps,
            method=method,
            ep_guard=args.ep_guard,
        )
        export_table(sweep_k3(config), fmt, args.out)

    elif command.name == "k3max":
        records = tau_min_curve(args.alpha, args.tol, method, args.window_max, args.ep_guard)
        export_table(records, fmt, args.out)

    elif command.name == "corr":
        rows = []
        for alpha in args.alpha:
            result = k3(alpha, args.tau, method, args.ep_guard)
            rows.append(ScanRow(alpha=alpha, tau=args.tau, **result.model_dump(include={"c21", "c32", "c31", "k3"})))
        export_table(rows, fmt, args.out)

    elif command.name == "quarter":
        export_table(correlations_at_quarter_tau(args.alpha, method, args.ep_guard), fmt, args.out)

    elif command.name == "verify":
        report = verify_closed_forms(args.samples, args.seed, args.tol, args.alpha_max, args.ep_guard)
        export_table(report.deviations, fmt, args.out)
        if not report.passed:
            print(
                f"{PROG}: verify: repaired closed form deviates by "
                f"{report.deviation(ClosedFormVariant.REPAIRED).max_abs_deviation:.3e} > tol {args.tol:g}",
                file=sys.stderr,
            )
            return EXIT_RUNTIME

    elif command.name == "eigen":
        report = eigen_report(build_hamiltonian(args.s, args.alpha, args.ep_guard))
        export_table([report], fmt, args.out)

    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one invocation; 0 on success, 2 on flag errors, 1 on runtime errors."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        command = parse_flags(argv)
    except UsageError as e:
        sys.stderr.write(e.usage)
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(command.args.log_level or settings.LGI_PT_LOG_LEVEL)
    try:
        return _execute(command)
    except LgiPtError as e:
        logger.debug("Command %s failed", command.name, exc_info=True)
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
