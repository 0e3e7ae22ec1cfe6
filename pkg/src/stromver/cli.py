"""Command-line interface: ``stromver {verify,decompose,connection,rep-check,selftest}``.

Exit codes: 0 all requested checks pass, 1 a check fails, 2 malformed input,
3 the anomaly equation has no solution in α'.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from .acceptance import run_acceptance
from .bundles import FlatBundle, GroupPresentation, check_relations, check_unitary, clock_shift, load_rep, stability_report
from .connections import connection_to_json
from .errors import IndeterminateRank, StromverError
from .forms import FLIPPED, RIGHT_INVARIANT, Coframe, kaehler_form
from .lie import sl2_standard
from .reps import build_module, decompose, report as module_report
from .scalars import parse_scalar
from .verifier import abelian_instance, canonical_instance, full_report, load_instance

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NO_SOLUTION = 0, 1, 2, 3

log = logging.getLogger("stromver")


class InputError(Exception):
    pass


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _scalar(text: str):
    try:
        return parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _connection(text: str) -> str:
    if text in ("chern", "bismut"):
        return text
    if text.startswith("gauduchon:"):
        try:
            t = parse_scalar(text.split(":", 1)[1])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))
        if not t.is_real():
            raise argparse.ArgumentTypeError("gauduchon parameter must be real")
        return f"gauduchon:{t}"
    raise argparse.ArgumentTypeError("expected chern, bismut or gauduchon:<t>")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--tol", type=_positive_float, default=1e-10, help="floating tolerance (float mode only)")
    common.add_argument("--sign", choices=("default", "flipped"), default="default", help="d-sign convention")

    p = argparse.ArgumentParser(prog="stromver", description="Exact checks of the heterotic system on invariant data.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify the five equations on an instance")
    v.add_argument("input", help="builtin:sl2, builtin:abelian or a JSON instance file")
    v.add_argument("--alpha-prime", type=_scalar, default=None)
    v.add_argument("--connection", type=_connection, default=None)

    dcp = sub.add_parser("decompose", parents=[common], help="decompose an su(2)-module recipe")
    dcp.add_argument("recipe")

    c = sub.add_parser("connection", parents=[common], help="dump a tangent connection")
    c.add_argument("input", nargs="?", default="builtin:sl2")
    c.add_argument("--connection", type=_connection, default="chern")

    r = sub.add_parser("rep-check", parents=[common], help="check a unitary representation")
    r.add_argument("input", help="clockshift:<n> or a JSON representation file")

    sub.add_parser("selftest", parents=[common], help="run the acceptance matrix")
    return p


def _sign(args) -> int:
    return FLIPPED if args.sign == "flipped" else RIGHT_INVARIANT


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _instance(args):
    sign = _sign(args)
    if args.input == "builtin:sl2":
        return canonical_instance(sign, args.connection or "chern", args.alpha_prime)
    if args.input == "builtin:abelian":
        inst = abelian_instance(sign, args.alpha_prime)
        if args.connection and args.connection != "chern":
            return load_instance(
                {"algebra": {"dim": 3, "name": "abelian"}, "connection": args.connection},
                sign,
                alpha_prime=args.alpha_prime,
            )
        return inst
    if args.input.startswith("builtin:"):
        raise InputError(f"unknown builtin {args.input!r}")
    return load_instance(_read_json(args.input), sign, args.connection, args.alpha_prime)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_verify(args) -> int:
    report = full_report(_instance(args))
    _emit(args, report.to_dict(), report.to_text())
    return report.exit_code


def cmd_decompose(args) -> int:
    m = build_module(args.recipe)
    rep = module_report(m)
    text = f"{m.recipe}: dim {m.dim}, invariant_dim {rep['invariant_dim']}, {decompose(m)}"
    _emit(args, rep, text)
    return EXIT_OK


def cmd_connection(args) -> int:
    args.alpha_prime = None
    inst = _instance(args)
    payload = connection_to_json(inst.tangent, inst.h)
    res = payload["residuals"]
    text = (
        f"{payload['kind']} connection (sign {inst.frame.sign:+d}): metric {res['metric_compatible']}, "
        f"flat {res['curvature_zero']}, torsion-free {res['torsion_zero']}, skew torsion {res['torsion_totally_skew']}"
    )
    _emit(args, payload, text)
    return EXIT_OK if res["metric_compatible"] else EXIT_FAIL


def cmd_rep_check(args) -> int:
    if args.input.startswith("clockshift:"):
        try:
            n = int(args.input.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad rank in {args.input!r}") from exc
        rep = clock_shift(n)
        pres = GroupPresentation.free(tuple(rep.generators))
    else:
        rep, pres = load_rep(_read_json(args.input))
    rep = replace(rep, tol=args.tol)
    unit = check_unitary(rep)
    rel = check_relations(rep, pres)
    g, h, _ = sl2_standard()
    F = Coframe(g, _sign(args))
    stab = stability_report(FlatBundle(rep, F), kaehler_form(F, h))
    payload = {"unitary": unit.to_json(), "relations": rel.to_json(), "stability": stab}
    text = (
        f"rank {rep.n} ({rep.mode}): unitary {'pass' if unit.passed else 'fail'}, "
        f"relations {'pass' if rel.passed else 'fail'}, commutant {stab['commutant_dim']}, "
        f"degree {stab['degree']}, {stab['verdict']}"
    )
    _emit(args, payload, text)
    return EXIT_OK if unit.passed and rel.passed else EXIT_FAIL


def cmd_selftest(args) -> int:
    rows = run_acceptance(_sign(args))
    payload = {"sign": args.sign, "rows": [{"id": r.key, "title": r.title, "pass": r.passed, "detail": r.detail} for r in rows]}
    _emit(args, payload, "\n".join(r.line() for r in rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "connection": cmd_connection,
    "rep-check": cmd_rep_check,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    level = os.environ.get("STROMVER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except IndeterminateRank as exc:
        print(f"stromver: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, StromverError, ValueError) as exc:
        print(f"stromver: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
