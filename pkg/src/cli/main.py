"""Command-line entry point.

    nosignal-bounds [--log-level L] reproduce|bound|compare|discriminate ...

Exit codes: 0 success, 1 a check or ordering failed, 2 bad input.
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from src.cli.compare import (
    compare_ensemble,
    declaration_matches,
    family_summary,
    ns_bound,
    ns_record,
    oracle_record,
)
from src.cli.ensemble_file import load_ensemble
from src.cli.report import FORMATS, EnsembleRecord, Report, emit
from src.cli.reproduce import run_reproduction
from src.config.settings import LOG_LEVELS, configure_logging, settings
from src.linalg.errors import ConvergenceError, StateError
from src.nosignal.bound import lp_bound, qubit_ns_bound
from src.nosignal.decomposition import alpha_max, build_qubit_family, build_spin_family
from src.oracle.optimizer import optimize_povm
from src.states.spin import spin_generators

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2


class InputError(ValueError):
    """Arguments that are well-formed but cannot be served."""


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _angle_list(text: str) -> List[float]:
    """Comma-separated radians."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radians, got {text!r}")


def _output_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=FORMATS, default="table", help="output format")
    parent.add_argument("--out", default=None, help="write the report here (JSON when --format table)")
    return parent


def _oracle_flags(restarts: bool = True) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    if restarts:
        parent.add_argument("--restarts", type=_positive_int, default=settings.oracle_restarts)
        parent.add_argument("--seed", type=_seed, default=settings.seed)
    parent.add_argument("--max-iters", type=_positive_int, default=settings.oracle_max_iters)
    parent.add_argument("--tol", type=_positive_float, default=settings.oracle_tol)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nosignal-bounds",
        description="No-signaling bounds on minimum-error quantum state discrimination.",
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper, default=None)
    commands = parser.add_subparsers(dest="command", required=True)
    output = _output_flags()

    commands.add_parser(
        "reproduce",
        parents=[output, _oracle_flags()],
        help="reproduce the known values and run every acceptance check",
    )

    bound = commands.add_parser("bound", help="no-signaling bound for a family")
    kinds = bound.add_subparsers(dest="kind", required=True)
    qubit = kinds.add_parser("qubit", parents=[output], help="symmetric qubit family")
    qubit.add_argument("--n", type=int, required=True)
    qubit.add_argument("--theta", type=float, required=True, help="polar angle (radians)")
    qubit.add_argument("--r", type=float, required=True, help="Bloch length in [0, 1]")
    spin = kinds.add_parser("spin", parents=[output], help="rotated spin-j family")
    spin.add_argument("--two-j", type=int, required=True)
    spin.add_argument("--alpha", type=float, required=True)
    spin.add_argument("--thetas", type=_angle_list, required=True, help="comma-separated radians")
    path = kinds.add_parser("file", parents=[output], help="ensemble file with a known symmetry")
    path.add_argument("path")

    compare = commands.add_parser(
        "compare", parents=[output, _oracle_flags()], help="all bounds and the oracle for a file"
    )
    compare.add_argument("path")

    discriminate = commands.add_parser(
        "discriminate", parents=[output, _oracle_flags(restarts=False)],
        help="optimal measurement for a file",
    )
    discriminate.add_argument("path")
    return parser


def cmd_reproduce(args: argparse.Namespace) -> Report:
    return run_reproduction(
        restarts=args.restarts, seed=args.seed, max_iters=args.max_iters, tol=args.tol
    )


def _bound_qubit(args: argparse.Namespace) -> EnsembleRecord:
    bound = qubit_ns_bound(args.n, args.theta, args.r)
    summary = None
    if bound.construction == "qubit-delta":
        summary = family_summary(build_qubit_family(args.n, args.theta, args.r))
    return EnsembleRecord(
        ensemble_id=f"qubit-N{args.n}-theta{args.theta:.6g}-r{args.r:.6g}",
        n_states=args.n,
        dim=2,
        ns_bound=ns_record(bound),
        family=summary,
    )


def _bound_spin(args: argparse.Namespace) -> EnsembleRecord:
    sys_ = spin_generators(args.two_j)
    try:
        family = build_spin_family(sys_, args.alpha, args.thetas)
    except StateError as e:
        raise InputError(f"{e}; |alpha| may be at most {alpha_max(sys_):.9g} for j={sys_.j:g}") from e
    return EnsembleRecord(
        ensemble_id=f"spin-2j{args.two_j}-alpha{args.alpha:.6g}",
        n_states=len(args.thetas),
        dim=sys_.dim,
        ns_bound=ns_record(lp_bound(family)),
        family=family_summary(family),
    )


def _bound_file(args: argparse.Namespace) -> EnsembleRecord:
    ensemble_id, ensemble, doc = load_ensemble(args.path)
    if doc.family is not None and not declaration_matches(ensemble, doc.family):
        raise InputError(
            f"'{ensemble_id}' declares a {doc.family.kind} family that does not reproduce its states"
        )
    bound = ns_bound(ensemble, doc.family)
    if bound is None:
        raise InputError(
            f"'{ensemble_id}' has no recognized symmetry, so no decomposition family can be "
            "built for it; use `compare` for L4 and the numerical optimum"
        )
    return EnsembleRecord(
        ensemble_id=ensemble_id, n_states=ensemble.size, dim=ensemble.dim, ns_bound=ns_record(bound)
    )


def cmd_bound(args: argparse.Namespace) -> Report:
    builders: Dict[str, Callable[[argparse.Namespace], EnsembleRecord]] = {
        "qubit": _bound_qubit,
        "spin": _bound_spin,
        "file": _bound_file,
    }
    record = builders[args.kind](args)
    logger.info(
        "Bound for '%s': success <= %.12g (%s)",
        record.ensemble_id, record.ns_bound.success_upper, record.ns_bound.construction,
    )
    return Report(command=f"bound {args.kind}", records=[record])


def cmd_compare(args: argparse.Namespace) -> Report:
    ensemble_id, ensemble, doc = load_ensemble(args.path)
    record = compare_ensemble(
        ensemble_id, ensemble, declared=doc.family, restarts=args.restarts,
        seed=args.seed, max_iters=args.max_iters, tol=args.tol,
    )
    return Report(command="compare", seed=args.seed, records=[record])


def cmd_discriminate(args: argparse.Namespace) -> Report:
    ensemble_id, ensemble, _ = load_ensemble(args.path)
    result = optimize_povm(ensemble, max_iters=args.max_iters, tol=args.tol)
    record = EnsembleRecord(
        ensemble_id=ensemble_id,
        n_states=ensemble.size,
        dim=ensemble.dim,
        oracle=oracle_record(result, with_povm=True),
    )
    return Report(command="discriminate", records=[record])


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "reproduce": cmd_reproduce,
    "bound": cmd_bound,
    "compare": cmd_compare,
    "discriminate": cmd_discriminate,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT
    configure_logging(args.log_level)

    try:
        report = COMMANDS[args.command](args)
        emit(report, args.format, args.out)
    except (ValueError, OSError) as e:
        logger.error("Input error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as e:
        logger.error("Numerical failure: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    if not report.ok:
        for failure in report.failures():
            print(f"FAILED {failure}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
