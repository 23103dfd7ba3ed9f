"""Command-line front end.

    motivzeta zeta brieskorn "x^3 - y^3" --rational
    motivzeta zeta newton "x^2*y + y^4" --series
    motivzeta zeta resolution data.json
    motivzeta zeta modified "x^3 - y^3" --rational
    motivzeta milnor newton "x^3 - y^3"
    motivzeta realize --chi --pos zeta brieskorn "x^3 - y^3"
    motivzeta recover --dim 2 --self-test "x^3 - y^3"
    motivzeta verify ts "x^2" "y^3" --order 40

Exit status: 0 on success, 1 on domain errors, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .brieskorn import (
    brieskorn_modified_series_lazy,
    brieskorn_rational_form,
    brieskorn_zeta,
    milnor_fiber_brieskorn,
    milnor_fiber_from_modified,
    verify_thom_sebastiani,
)
from .errors import InputError, InvalidGerm, MotivZetaError, UsageError
from .newton import guibert_zeta, milnor_fiber_newton
from .parsing import PolyExpr, parse_polynomial
from .recovery import BrieskornOracle, DumpOracle, RecoveryState, bound_exponents, recover_exponents
from .resolution import ResolutionData, evaluate_rationality, milnor_fiber_resolution
from .scalars import ScalarValue
from .series import RationalZeta, ZetaSeries

SCHEMA = "motivzeta/1"
ROUTES = ("brieskorn", "newton", "resolution", "modified")
REALIZATION_FLAGS = ("plus", "minus", "pos", "neg", "forget")


def _default_order() -> int:
    raw = os.environ.get("MOTIVZETA_ORDER")
    if raw is None:
        return 30
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MOTIVZETA_ORDER must be an integer, got {raw!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--order", type=int, default=None, help="series order (default 30 or $MOTIVZETA_ORDER)")
    common.add_argument("--l-depth", type=int, default=30, help="depth of L^-1 expansions of non-polynomial coefficients")
    common.add_argument("--json", action="store_true", help="emit schema-versioned JSON")

    p = _Parser(prog="motivzeta", description="Exact motivic local zeta functions of real polynomial germs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zeta", parents=[common], help="zeta function by one of the routes")
    z.add_argument("route", choices=ROUTES)
    z.add_argument("input", help="polynomial, or a resolution JSON file for the resolution route")
    z.add_argument("--rational", action="store_true", help="rational form (default)")
    z.add_argument("--series", action="store_true", help="expanded coefficients up to --order")
    z.add_argument("--milnor", action="store_true", help="also print the Milnor fiber")
    z.add_argument("--assume-nondegenerate", action="store_true", help="skip the Newton non-degeneracy check")

    m = sub.add_parser("milnor", parents=[common], help="motivic Milnor fiber")
    m.add_argument("route", choices=ROUTES)
    m.add_argument("input")
    m.add_argument("--assume-nondegenerate", action="store_true")

    r = sub.add_parser("realize", parents=[common], help="realize a zeta function: realize --chi --pos zeta ...")
    kind = r.add_mutually_exclusive_group(required=True)
    kind.add_argument("--chi", dest="kind", action="store_const", const="chi")
    kind.add_argument("--beta", dest="kind", action="store_const", const="beta")
    which = r.add_mutually_exclusive_group()
    for w in REALIZATION_FLAGS:
        which.add_argument(f"--{w}", dest="which", action="store_const", const=w)
    r.add_argument("--series", action="store_true", help="realized coefficients instead of the rational form")
    r.add_argument("zeta", nargs=argparse.REMAINDER, help="a zeta command")

    rc = sub.add_parser("recover", parents=[common], help="recover Brieskorn exponents")
    rc.add_argument("--dim", type=int, required=True)
    src = rc.add_mutually_exclusive_group(required=True)
    src.add_argument("--self-test", metavar="POLY", help="hidden Brieskorn polynomial answering the oracle")
    src.add_argument("--dump", metavar="FILE", help="JSON array of coefficient records")
    rc.add_argument("--write-dump", metavar="FILE", help="with --self-test, save every answered query")

    v = sub.add_parser("verify", parents=[common], help="identity checks")
    v.add_argument("identity", choices=("ts",))
    v.add_argument("first")
    v.add_argument("second")
    return p


# ---------------------------------------------------------------------------


def _brieskorn(src: str) -> PolyExpr:
    pe = parse_polynomial(src)
    if pe.brieskorn is None:
        raise InvalidGerm(f"{pe.render()} is not a Brieskorn polynomial")
    return pe


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _zeta_rational(route: str, src: str, assume: bool) -> RationalZeta:
    if route == "resolution":
        return evaluate_rationality(ResolutionData.from_json(_read(src)))
    if route == "modified":
        return brieskorn_rational_form(_brieskorn(src).brieskorn)
    # Brieskorn polynomials are non-degenerate, so their rational form comes from the faces
    poly = _brieskorn(src).poly if route == "brieskorn" else parse_polynomial(src).poly
    return guibert_zeta(poly, assume or route == "brieskorn")


def _zeta_series(route: str, src: str, assume: bool, order: int) -> ZetaSeries:
    if route == "brieskorn":
        return brieskorn_zeta(_brieskorn(src).brieskorn, order)
    if route == "modified":
        return brieskorn_modified_series_lazy(_brieskorn(src).brieskorn, order)
    return _zeta_rational(route, src, assume).expand(order)


def _milnor(route: str, src: str, assume: bool):
    if route == "brieskorn":
        return milnor_fiber_brieskorn(_brieskorn(src).brieskorn)
    if route == "modified":
        return milnor_fiber_from_modified(_brieskorn(src).brieskorn)
    if route == "newton":
        return milnor_fiber_newton(parse_polynomial(src).poly, assume)
    return milnor_fiber_resolution(ResolutionData.from_json(_read(src)))


def _scalar_text(c: ScalarValue, depth: int) -> str:
    return c.render("u") if c.is_laurent() else c.expand_at_infinity(depth).render("u")


def _series_lines(z: ZetaSeries) -> list[str]:
    return [f"T^{n}: {z[n].render()}" for n in range(1, z.order + 1) if not z[n].is_zero()]


def output_schema() -> dict:
    """The JSON Schema every --json output validates against."""
    return json.loads(resources.files("motivzeta").joinpath("output.schema.json").read_text())


def _emit(args, payload: dict, text_lines: list[str], out) -> None:
    if args.json:
        out.write(json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=False) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _cmd_zeta(args, out) -> None:
    order = args.order if args.order is not None else _default_order()
    payload = {"command": "zeta", "route": args.route, "input": args.input}
    lines = []
    want_series = args.series
    want_rational = args.rational or not args.series
    if want_rational:
        r = _zeta_rational(args.route, args.input, args.assume_nondegenerate)
        payload["rational"] = r.render()
        lines.append(r.render())
    if want_series:
        z = _zeta_series(args.route, args.input, args.assume_nondegenerate, order)
        payload["order"] = order
        payload["series"] = [z[n].render() for n in range(1, order + 1)]
        lines.extend(_series_lines(z))
    if args.milnor:
        s = _milnor(args.route, args.input, args.assume_nondegenerate)
        payload["milnor"] = s.render()
        lines.append(f"Milnor fiber: {s.render()}")
    _emit(args, payload, lines, out)


def _cmd_milnor(args, out) -> None:
    s = _milnor(args.route, args.input, args.assume_nondegenerate)
    _emit(args, {"command": "milnor", "route": args.route, "input": args.input, "milnor": s.render()}, [s.render()], out)


def _cmd_realize(args, out) -> None:
    rest = list(args.zeta)
    if not rest or rest[0] != "zeta":
        raise UsageError("realize expects a zeta command, e.g. realize --chi --pos zeta brieskorn \"x^3 - y^3\"")
    inner = build_parser().parse_args(rest)
    which = args.which or "forget"
    order = next((o for o in (args.order, inner.order) if o is not None), None)
    order = order if order is not None else _default_order()
    r = _zeta_rational(inner.route, inner.input, inner.assume_nondegenerate)
    realized = r.realize(args.kind, which)
    payload = {"command": "realize", "kind": args.kind, "realization": which, "route": inner.route, "input": inner.input}
    if args.series:
        vals = realized.series(order)
        shown = [str(v) if args.kind == "chi" else _scalar_text(v, args.l_depth) for v in vals]
        payload["order"] = order
        payload["series"] = vals if args.kind == "chi" else shown
        lines = [f"T^{n}: {s}" for n, s in enumerate(shown, start=1) if s != "0"]
    else:
        payload["rational"] = realized.render()
        lines = [realized.render()]
    _emit(args, payload, lines, out)


def _cmd_recover(args, out) -> None:
    if args.self_test:
        pe = _brieskorn(args.self_test)
        if pe.brieskorn.d != args.dim:
            raise UsageError(f"--dim {args.dim} does not match the {pe.brieskorn.d} variables of the self-test polynomial")
        oracle = BrieskornOracle(pe.brieskorn)
    else:
        oracle = DumpOracle.from_json(_read(args.dump))
    state = RecoveryState.for_bound(bound_exponents(oracle, args.dim))
    exps = recover_exponents(oracle, args.dim, state=state)
    if args.write_dump:
        if not args.self_test:
            raise UsageError("--write-dump needs --self-test")
        Path(args.write_dump).write_text(oracle.dump())
    text = "exponents: " + ",".join(map(str, exps))
    _emit(args, {"command": "recover", "dim": args.dim, "bound": state.K, "exponents": exps}, [text], out)


def _cmd_verify(args, out) -> None:
    order = args.order if args.order is not None else _default_order()
    a, b = _brieskorn(args.first), _brieskorn(args.second)
    report = verify_thom_sebastiani(a.brieskorn, b.brieskorn, order)
    payload = {
        "command": "verify",
        "identity": "ts",
        "order": order,
        "passed": report.passed,
        "first_divergent": report.first_divergent,
        "milnor_identity": report.milnor_identity,
    }
    _emit(args, payload, [report.render()], out)
    if not report.passed:
        raise _Failed()


class _Failed(Exception):
    """A verification ran and reported a failure; its report is already printed."""


COMMANDS = {"zeta": _cmd_zeta, "milnor": _cmd_milnor, "realize": _cmd_realize, "recover": _cmd_recover, "verify": _cmd_verify}


def run(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.order is not None and args.order < 0:
            raise UsageError("--order must be nonnegative")
        COMMANDS[args.command](args, out)
    except _Failed:
        return 1
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except MotivZetaError as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
