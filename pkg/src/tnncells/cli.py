"""
Command-line front end.

    tnncells poset    --type A2 --j 1 --format dot --out a2_j1.dot
    tnncells check    --type A3
    tnncells verify   --type A2 --trials 20 --seed 0 --out report.json
    tnncells classify matrix.json --j 1

Exit codes: 0 success, 1 mathematical violation, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .coxeter import CartanType, default_cap, enumeration_cap, weyl_group
from .errors import (
    ClassificationError, EnumerationTooLarge, ReductionError, TnnCellsError,
)
from .parabolic import parabolic
from .poset import NODE_CAP, closure_poset, export_poset, poset_axioms_report

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    cartan: CartanType | None
    J: tuple[int, ...] | None
    seed: int
    trials: int
    out: Path | None
    format: str
    cap: int
    workers: int = 1
    matrix: Path | None = None

    @property
    def node_cap(self) -> int:
        return min(self.cap, NODE_CAP)


def parse_index_list(text: str) -> tuple[int, ...]:
    """``"1,2"``, ``"1 2"`` or ``""`` (the empty set)."""
    parts = text.replace(",", " ").split()
    try:
        return tuple(sorted({int(p) for p in parts}))
    except ValueError:
        raise UsageError(f"cannot parse index list {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="cartan", help="Cartan type, e.g. A2, B3, G2")
    common.add_argument("--j", dest="J", default=None,
                        help='parabolic index set, comma or space separated ("" for empty)')
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--cap", type=int, default=None,
                        help="group enumeration cap (default: $TNNCELLS_CAP or 10^6)")

    parser = argparse.ArgumentParser(prog="tnncells", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("poset", parents=[common], help="export the closure poset of Q^J")
    sub.add_parser("check", parents=[common], help="check the order axioms for every J")
    verify = sub.add_parser("verify", parents=[common], help="run the SL_n verification suites")
    verify.add_argument("--workers", type=int, default=1)
    classify = sub.add_parser("classify", parents=[common], help="classify a flag g B^+")
    classify.add_argument("matrix", type=Path, help='JSON array of rows, entries like "p/q"')
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    cartan = CartanType.parse(args.cartan) if args.cartan is not None else None
    J = parse_index_list(args.J) if args.J is not None else None
    if cartan is not None and J is not None and not set(J) <= set(cartan.index_set):
        raise UsageError(f"J={list(J)} is not a subset of {list(cartan.index_set)}")
    if args.trials <= 0:
        raise UsageError(f"--trials must be positive, got {args.trials}")
    if args.cap is not None and args.cap <= 0:
        raise UsageError(f"--cap must be positive, got {args.cap}")
    workers = getattr(args, "workers", 1)
    if workers <= 0:
        raise UsageError(f"--workers must be positive, got {workers}")
    return RunConfig(
        command=args.command, cartan=cartan, J=J, seed=args.seed, trials=args.trials,
        out=args.out, format=args.format, cap=args.cap or default_cap(),
        workers=workers, matrix=getattr(args, "matrix", None),
    )


def _require_type(cfg: RunConfig) -> CartanType:
    if cfg.cartan is None:
        raise UsageError(f"{cfg.command} needs --type")
    weyl_group(cfg.cartan).elements(cfg.cap)
    return cfg.cartan


def _emit(cfg: RunConfig, data: bytes):
    if cfg.out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        cfg.out.write_bytes(data)


def _fmt_J(J) -> str:
    return "{" + ",".join(map(str, J)) + "}"


def cmd_poset(cfg: RunConfig) -> int:
    cartan = _require_type(cfg)
    J = cfg.J or ()
    p = closure_poset(cartan, J, cfg.node_cap)
    _emit(cfg, export_poset(p, cfg.format))
    # keep stdout clean for the poset itself when no --out is given
    log = sys.stdout if cfg.out is not None else sys.stderr
    print(f"{cartan} J={_fmt_J(J)}: {len(p.nodes)} nodes, {len(p.covers)} covers, "
          f"f-vector {p.f_vector()}", file=log)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    from .chevalley.survey import all_subsets

    cartan = _require_type(cfg)
    Js = [cfg.J] if cfg.J is not None else all_subsets(cartan.index_set)
    status = EXIT_OK
    reports = []
    for J in Js:
        report = poset_axioms_report(closure_poset(cartan, J, cfg.node_cap))
        reports.append(report)
        print(("ok   " if report.ok else "FAIL ") + report.summary())
        if not report.ok:
            status = EXIT_VIOLATION
            for name, witness in report.witnesses.items():
                print(f"     {name} witness: {witness}")
    if cfg.out is not None:
        doc = [{"cartan": r.cartan, "J": list(r.J), "ok": r.ok, "nodes": r.nodes, "edges": r.edges,
                "f_vector": list(r.f_vector), "euler_characteristic": r.euler_characteristic,
                "witnesses": r.witnesses} for r in reports]
        cfg.out.write_text(json.dumps(doc, indent=1) + "\n")
    return status


def _type_a_n(cartan: CartanType) -> int:
    from .chevalley.flags import MAX_N

    if cartan.family != "A":
        raise UsageError(f"the matrix model covers type A only, got {cartan}")
    if cartan.rank + 1 > MAX_N:
        raise UsageError(f"SL_{cartan.rank + 1} exceeds the matrix model cap n <= {MAX_N}")
    return cartan.rank + 1


def cmd_verify(cfg: RunConfig) -> int:
    from .chevalley.survey import run_verification

    cartan = _require_type(cfg)
    n = _type_a_n(cartan)
    Js = [cfg.J] if cfg.J is not None else None
    report = run_verification(n, cfg.trials, cfg.seed, Js, workers=cfg.workers)
    for suite in report.suites:
        line = f"{'ok  ' if suite.ok else 'FAIL'} {suite.name}: {suite.checks} checks, {suite.failure_count} failures"
        if "coverage" in suite.notes:
            line += f", full coverage on {suite.notes['full_coverage_cells']}/{suite.notes['cells']} cells"
        print(line)
        for f in suite.failures:
            print("     reproducer: " + json.dumps(f, sort_keys=True))
    if cfg.out is not None:
        cfg.out.write_text(json.dumps(report.to_json(), indent=1) + "\n")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_classify(cfg: RunConfig) -> int:
    from .chevalley import FlagPoint, RationalMatrix, classify_flag, classify_parabolic

    try:
        rows = json.loads(cfg.matrix.read_text())
        g = RationalMatrix(rows)
    except (OSError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read matrix from {cfg.matrix}: {exc}") from None
    n = g.n
    if cfg.cartan is not None and _type_a_n(cfg.cartan) != n:
        raise UsageError(f"a {n}x{n} matrix does not match type {cfg.cartan}")
    det = g.det()
    if det != 1:
        raise UsageError(f"matrix must have determinant 1, got {det}")
    if cfg.cartan is None:
        _type_a_n(CartanType("A", n - 1))
    flag = FlagPoint(g)
    if cfg.J:
        parabolic(f"A{n - 1}", cfg.J)
        print(classify_parabolic(flag, cfg.J))
    else:
        print(classify_flag(flag))
    return EXIT_OK


COMMANDS = {"poset": cmd_poset, "check": cmd_check, "verify": cmd_verify, "classify": cmd_classify}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        with enumeration_cap(cfg.cap):
            return COMMANDS[cfg.command](cfg)
    except EnumerationTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ClassificationError, ReductionError) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (UsageError, TnnCellsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
