"""Batch command line: validate, decompose, classify, oracle.

Exit codes: 0 pass, 1 negative verdict or failed check, 2 input error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import formats
from .algebra import center
from .classify import equivalent, inner_equivalent
from .cohomology import h1_trivial, nontrivial_cocycle
from .errors import BudgetExceeded, FIError, H1Obstruction
from .field import QuadraticFiniteField, field_from_descriptor
from .involution import decompose
from .oracle import EnumerationBudget, verify_theorems
from .poset import components, enumerate_involutions, is_connected, lambda_decomposition

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _field_arg(text: str):
    try:
        return field_from_descriptor(text)
    except (ValueError, FIError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=None, help="qi or gf:p")
    common.add_argument("--budget", type=int, default=None, help="cap on enumerated involutions (oracle)")
    common.add_argument("--json", dest="json_out", default=None, help="also write the report to this file")

    parser = argparse.ArgumentParser(prog="fi-involutions", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="structural report for a poset file")
    p.add_argument("poset")
    p = sub.add_parser("decompose", parents=[common], help="factor an involution file")
    p.add_argument("involution")
    p = sub.add_parser("classify", parents=[common], help="decide equivalence of two involution files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--inner-only", action="store_true", help="only allow inner automorphisms")
    p = sub.add_parser("oracle", parents=[common], help="brute-force checks on a poset over GF(p^2)")
    p.add_argument("poset")
    return parser


def _emit(args, payload, lines: bool = False) -> None:
    if lines:
        text = "".join(json.dumps(rec) + "\n" for rec in payload)
    else:
        text = formats.dumps(payload) + "\n"
    sys.stdout.write(text)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_validate(args) -> int:
    P = formats.load_poset(args.poset)
    F = args.field or field_from_descriptor("qi")
    connected = is_connected(P)
    report = {
        "elements": len(P),
        "connected": connected,
        "components": len(components(P)),
        "center_dimension": center(P, F).dimension,
        "field": F.descriptor(),
    }
    if connected:
        h1 = h1_trivial(P, F)
        entry = {"trivial": h1.trivial, "group": h1.summary()}
        if not h1.trivial:
            entry["cocycle"] = formats.cocycle_to_json(nontrivial_cocycle(P, F))
        report["h1"] = entry
    else:
        report["warnings"] = ["poset is disconnected; the second-kind theory assumes a connected poset"]
    invs = []
    for lam in enumerate_involutions(P):
        x1, x2, x3 = lambda_decomposition(P, lam).labels()
        invs.append({"lambda": lam.as_dict(), "x1": x1, "x2": x2, "x3": x3})
    report["involutions"] = invs
    _emit(args, report)
    return EXIT_OK


def cmd_decompose(args) -> int:
    rho = formats.load_involution(args.involution, field=args.field or field_from_descriptor("qi"))
    dec = decompose(rho)
    _emit(args, formats.decomposition_to_json(dec))
    return EXIT_OK


def cmd_classify(args) -> int:
    F = args.field or field_from_descriptor("qi")
    rho1 = formats.load_involution(args.first, field=F)
    rho2 = formats.load_involution(args.second, poset=rho1.poset, field=rho1.field)
    decide = inner_equivalent if args.inner_only else equivalent
    try:
        rep = decide(rho1, rho2)
    except H1Obstruction as exc:
        payload = {"verdict": "undecided", "obstruction": {"kind": "h1_obstruction", "detail": str(exc)}}
        if exc.cocycle is not None:
            payload["obstruction"]["cocycle"] = formats.cocycle_to_json(exc.cocycle)
        _emit(args, payload)
        return EXIT_NEGATIVE
    _emit(args, formats.report_to_json(rep, rho1.field))
    return EXIT_OK if rep.equivalent else EXIT_NEGATIVE


def cmd_oracle(args) -> int:
    P = formats.load_poset(args.poset)
    F = args.field or field_from_descriptor("gf:3")
    if not isinstance(F, QuadraticFiniteField):
        raise FIError("the oracle needs a finite field (--field gf:p)")
    budget = EnumerationBudget(max_field_size=max(9, F.order))
    if args.budget is not None:
        budget.max_involutions = args.budget
    report = verify_theorems(P, F, budget)
    _emit(args, report.lines(), lines=True)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


COMMANDS = {"validate": cmd_validate, "decompose": cmd_decompose, "classify": cmd_classify, "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FIError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
