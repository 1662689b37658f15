"""
Command line entry point: python -m app.main COMMAND ...

stdout carries one JSON report per run; diagnostics go to stderr.
"""
import argparse
import logging
import sys
from typing import List, Optional

from app.analytics.engine import run_verification
from app.config import (
    EXIT_INEQUIVALENT,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_UNDETERMINED,
    LOG_FORMAT,
    Settings,
)
from app.geometry.orbifold import FuchsianSignature, is_bad_signature, orbifold_euler, orbifold_homology
from app.ingestion.loader import RecordError, record_kind, resolve_record, serialize_record
from app.invariants import coisotropic, symplectic_orbit
from app.invariants.classify4 import ClassificationError, LagrangianAction, SymplecticAction, classify
from app.invariants.coisotropic import CoisotropicInvariants
from app.invariants.fixtures import get_fixture
from app.invariants.symplectic_orbit import SymplecticOrbitInvariants
from app.invariants.verdict import VerdictTag
from app.reports.exporter import (
    classification_report,
    error_report,
    homology_report,
    model_report,
    render,
    validation_report,
    verdict_report,
    verification_report,
    write_table,
)

logger = logging.getLogger("app")

VERDICT_EXIT = {
    VerdictTag.EQUIVALENT:   EXIT_OK,
    VerdictTag.INEQUIVALENT: EXIT_INEQUIVALENT,
    VerdictTag.UNDETERMINED: EXIT_UNDETERMINED,
}


def _emit(report) -> None:
    sys.stdout.write(render(report) + "\n")


def _unwrap(record):
    if isinstance(record, (LagrangianAction, SymplecticAction)):
        return record.invariants
    return record


def _orders(text: str) -> tuple:
    if not text:
        return ()
    try:
        return tuple(sorted(int(x) for x in text.split(",") if x.strip()))
    except ValueError:
        raise RecordError(f"cone point orders must be comma separated integers, got {text!r}", "-o")


# --- Commands ---

def cmd_fixture(args, settings: Settings) -> int:
    _emit(serialize_record(get_fixture(args.name)))
    return EXIT_OK


def cmd_check(args, settings: Settings) -> int:
    record = _unwrap(resolve_record(args.file))
    warnings = []
    if isinstance(record, CoisotropicInvariants):
        violations = coisotropic.validate(record)
        kind = "coisotropic"
    else:
        violations = symplectic_orbit.validate(record)
        warnings = symplectic_orbit.signature_warnings(record)
        kind = "symplectic_orbit"

    _emit(validation_report(kind, record.name, violations, warnings))
    return EXIT_OK if not violations else EXIT_INEQUIVALENT


def cmd_compare(args, settings: Settings) -> int:
    first, second = _unwrap(resolve_record(args.first)), _unwrap(resolve_record(args.second))
    if type(first) is not type(second):
        _emit(error_report("records of different kinds cannot be compared",
                           violations=[record_kind(first), record_kind(second)]))
        return EXIT_INPUT_ERROR

    module = coisotropic if isinstance(first, CoisotropicInvariants) else symplectic_orbit
    problems = [f"first: {v}" for v in module.validate(first)] + [f"second: {v}" for v in module.validate(second)]
    if problems:
        _emit(error_report("compare needs valid records", violations=problems))
        return EXIT_INPUT_ERROR

    if module is coisotropic:
        verdict = coisotropic.compare(first, second)
    else:
        verdict = symplectic_orbit.compare(first, second, node_cap=settings.node_cap)
    _emit(verdict_report(verdict))
    return VERDICT_EXIT[verdict.tag]


def cmd_classify4(args, settings: Settings) -> int:
    record = resolve_record(args.file)
    if isinstance(record, CoisotropicInvariants):
        record = LagrangianAction(record)
    elif isinstance(record, SymplecticOrbitInvariants):
        record = SymplecticAction(record)

    case = classify(record)
    _emit(classification_report(record.invariants.name, case))
    return EXIT_OK


def cmd_model(args, settings: Settings) -> int:
    record = _unwrap(resolve_record(args.file))
    module = coisotropic if isinstance(record, CoisotropicInvariants) else symplectic_orbit
    violations = module.validate(record)
    if violations:
        _emit(validation_report(record_kind(record), record.name, violations))
        return EXIT_INEQUIVALENT
    _emit(model_report(record.name, module.model_descriptor(record)))
    return EXIT_OK


def cmd_orbifold(args, settings: Settings) -> int:
    orders = _orders(args.orders)
    try:
        sig = FuchsianSignature(args.genus, orders)
    except ValueError as e:
        raise RecordError(str(e), "-o")
    bad = is_bad_signature(sig)
    if bad:
        logger.warning("signature %s is bad", sig)
    _emit(homology_report(sig, orbifold_homology(sig), bad, orbifold_euler(sig)))
    if args.action == "bad":
        return EXIT_INEQUIVALENT if bad else EXIT_OK
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    record = None
    if args.kind == "group-axioms":
        if not args.file:
            raise RecordError("verify group-axioms needs a coisotropic record", "FILE")
        record = _unwrap(resolve_record(args.file))
        if not isinstance(record, CoisotropicInvariants):
            raise RecordError("verify group-axioms needs a coisotropic record", "$.kind")

    df, summary = run_verification(args.kind, settings, record)
    if args.csv:
        write_table(df, args.csv)
    _emit(verification_report(args.kind, summary, settings.seed))
    return EXIT_OK if summary["passed"] else EXIT_INEQUIVALENT


# --- Parser ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--trials", type=int, default=None, help="random trials (default 1000)")
    common.add_argument("--node-cap", type=int, default=None, help="orbit search node cap (default 10^6)")
    common.add_argument("--grid", type=int, default=None, help="Hamiltonian grid points (default 1000)")
    common.add_argument("--csv", default=None, help="write the sweep table to this CSV file")
    common.add_argument("--log-level", default=None, help="logging level (default WARNING)")

    parser = argparse.ArgumentParser(
        prog="torusinv",
        description="Invariants of symplectic torus actions: validation, comparison, classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", parents=[common], help="print a built-in record")
    p.add_argument("name")
    p.set_defaults(handler=cmd_fixture)

    p = sub.add_parser("check", parents=[common], help="validate a record")
    p.add_argument("file", help="record file or fixture name")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("compare", parents=[common], help="decide equivalence of two records")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("classify4", parents=[common], help="four-case classification of a 2-torus action")
    p.add_argument("file")
    p.set_defaults(handler=cmd_classify4)

    p = sub.add_parser("model", parents=[common], help="describe the model of a record")
    p.add_argument("file")
    p.set_defaults(handler=cmd_model)

    p = sub.add_parser("orbifold", parents=[common], help="orbifold homology and bad signatures")
    p.add_argument("action", choices=["homology", "bad"])
    p.add_argument("-g", "--genus", type=int, required=True)
    p.add_argument("-o", "--orders", default="", help="comma separated cone point orders")
    p.set_defaults(handler=cmd_orbifold)

    p = sub.add_parser("verify", parents=[common], help="property sweeps")
    p.add_argument("kind", choices=["group-axioms", "hamiltonian", "orbifold"])
    p.add_argument("file", nargs="?", default=None)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT_ERROR

    try:
        settings = Settings.from_env().with_overrides(
            seed=args.seed, trials=args.trials, node_cap=args.node_cap,
            grid=args.grid, log_level=args.log_level,
        )
        logging.basicConfig(level=settings.log_level.upper(), format=LOG_FORMAT, stream=sys.stderr)
    except ValueError as e:
        _emit(error_report(str(e)))
        return EXIT_INPUT_ERROR

    try:
        return args.handler(args, settings)
    except ClassificationError as e:
        _emit(error_report("inconsistent record", violations=e.problems))
        return EXIT_INEQUIVALENT
    except RecordError as e:
        _emit(error_report(e.detail, e.location, e.violations))
        return EXIT_INPUT_ERROR
    except ValueError as e:
        _emit(error_report(str(e)))
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
