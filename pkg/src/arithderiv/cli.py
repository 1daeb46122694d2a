"""Command-line interface.

Every subcommand prints a JSON payload (or CSV with --format csv) on
stdout; diagnostics go to stderr. Exit codes: 0 success, 1 domain or
capacity errors, 2 usage errors. Rationals are passed and printed as
exact "num/den" strings, valuations as "num/e" or "inf", and symbolic
prime powers as "unit*p^exponent".
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import antideriv as ad
from . import dynamics as dyn
from . import lab
from . import quadfield as qf
from .derivative import PrimePowerForm, d_full, d_partial, d_sub, ppf_derivative, prime_set
from .errors import CapacityError, DomainError, GeneratorError, SearchError
from .exact import ExtendedValuation, nu_int
from .report import report_to_csv, report_to_json, write_report_files

__all__ = ["CommandResult", "main", "run"]


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    status: str  # "ok" | "error"
    payload: object
    error_kind: Optional[str] = None
    format: str = "json"
    report: object = None  # ProbeReport for lab commands

    @property
    def exit_code(self) -> int:
        if self.status == "ok":
            return 0
        return 2 if self.error_kind == "usage" else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- parsing


def _parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {s!r}") from exc


def _parse_ppf(s: str, p: int) -> PrimePowerForm:
    # "unit*p^exponent"
    try:
        unit_s, pow_s = s.split("*")
        base_s, exp_s = pow_s.split("^")
        unit, base, exp = Fraction(unit_s), int(base_s), int(exp_s)
    except ValueError as exc:
        raise UsageError(f"not a prime power form: {s!r}") from exc
    if base != p:
        raise UsageError(f"form base {base} does not match -p {p}")
    return PrimePowerForm.make(p, unit, exp)


def _parse_valuation(s: str, e: int) -> ExtendedValuation:
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a valuation: {s!r}") from exc
    try:
        return ExtendedValuation.from_value(value, e)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _parse_primes(s: str) -> tuple[int, ...]:
    try:
        return prime_set(int(t) for t in s.split(","))
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad prime set {s!r}: {exc}") from exc


def _parse_ideal(s: str) -> qf.PrimeIdealRef:
    parts = s.split(":")
    try:
        if len(parts) == 1:
            return qf.PrimeIdealRef(int(parts[0]))
        if len(parts) == 2:
            return qf.PrimeIdealRef(int(parts[0]), parts[1])
    except (ValueError, DomainError) as exc:
        raise UsageError(f"bad ideal {s!r}: {exc}") from exc
    raise UsageError(f"bad ideal {s!r}")


def _parse_ideals(s: str) -> list[qf.PrimeIdealRef]:
    return [_parse_ideal(t) for t in s.split(",")]


def _parse_element(K: qf.QuadraticField, s: str) -> qf.QuadraticElement:
    parts = s.split(",")
    if len(parts) != 2:
        raise UsageError(f"element must be 'a,b' for a + b*sqrt(D): {s!r}")
    return K.element(_parse_rational(parts[0]), _parse_rational(parts[1]))


def _frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def _element_payload(x) -> object:
    if x is None:
        return None
    if isinstance(x, PrimePowerForm):
        return str(x)
    return _frac_str(x)


# ------------------------------------------------------------ the parser


def _build_parser() -> _Parser:
    top = _Parser(prog="arithderiv", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized suites (outputs are "
                            "deterministic for a fixed seed)")
        return p

    p = common(sub.add_parser("deriv", help="arithmetic derivative"))
    p.add_argument("value")

    p = common(sub.add_parser("pderiv", help="partial derivative"))
    p.add_argument("value")
    p.add_argument("-p", type=int, required=True)

    p = common(sub.add_parser("subderiv", help="subderivative over a prime set"))
    p.add_argument("value")
    p.add_argument("-T", required=True, help="comma separated primes")

    p = common(sub.add_parser("iterate", help="iterate the valuation dynamics"))
    p.add_argument("-v", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-e", type=int, default=1)
    p.add_argument("-n", type=int, default=20)

    p = common(sub.add_parser("predict", help="kappa profile and predicted increments"))
    p.add_argument("-v", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-e", type=int, default=1)

    p = common(sub.add_parser("classify", help="long-run classification"))
    p.add_argument("-v", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-e", type=int, default=1)

    p = common(sub.add_parser("antideriv", help="anti-partial derivatives"))
    p.add_argument("value", help="rational or unit*p^exponent form")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-e", type=int, default=1)
    p.add_argument("--brute-range", default=None, help="a..b integer window")

    p = common(sub.add_parser("construct-n",
                              help="element whose derivative has a prescribed "
                                   "anti-derivative count"))
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--mode", choices=("paper", "small-k"), required=True)

    quad = sub.add_parser("quad", help="quadratic field operations")
    qsub = quad.add_subparsers(dest="quad_command", required=True)

    p = common(qsub.add_parser("split", help="splitting data of p"))
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-p", type=int, required=True)

    p = common(qsub.add_parser("deriv", help="derivative of a + b*sqrt(D)"))
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-x", required=True, help="element as 'a,b'")
    p.add_argument("-T", default=None, help="comma separated ideals p[:slot]")

    p = common(qsub.add_parser("ld-image", help="logarithmic derivative image"))
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--bound", type=int, default=100)

    labp = sub.add_parser("lab", help="continuity experiments")
    lsub = labp.add_subparsers(dest="lab_command", required=True)

    def lab_common(p):
        common(p)
        p.add_argument("-N", type=int, default=20)
        p.add_argument("--out-dir", default=None,
                       help="also write report.json/.csv/.png here")
        return p

    p = lab_common(lsub.add_parser("continuity"))
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-x", required=True)
    p.add_argument("--map", choices=("pderiv", "subderiv", "deriv"),
                   default="pderiv")
    p.add_argument("-T", default=None)
    p.add_argument("--generator", choices=("unit", "powers"), default=None)
    p.add_argument("--base", default=None)

    p = lab_common(lsub.add_parser("discont"))
    p.add_argument("-T", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-x", required=True)

    p = lab_common(lsub.add_parser("special"))
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--t-ideals", required=True)
    p.add_argument("--focus", required=True)
    p.add_argument("-x", required=True, help="element as 'a,b'")

    p = lab_common(lsub.add_parser("strictdiff"))
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-x", required=True)
    p.add_argument("--map", choices=("pderiv", "subderiv", "deriv"),
                   default="pderiv")
    p.add_argument("-T", default=None)
    p.add_argument("--pair-base", default=None)

    return top


_VALUE_COMMANDS = {"deriv", "pderiv", "subderiv", "antideriv"}
_VALUE_FLAGS = {"-p", "-T", "-e", "--brute-range", "--format", "--seed"}


def _hoist_positional(argv: list[str]) -> list[str]:
    """Move the value positional of deriv-like commands behind '--' so
    negative rationals are not mistaken for options."""
    if not argv or argv[0] not in _VALUE_COMMANDS or "--" in argv:
        return argv
    rest = argv[1:]
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok in _VALUE_FLAGS:
            i += 2
            continue
        if tok.startswith("--") and "=" in tok:
            i += 1
            continue
        break
    else:
        return argv
    value = rest.pop(i)
    return [argv[0], *rest, "--", value]


# ------------------------------------------------------------- dispatch


def _map_from_args(args) -> lab.DerivativeMap:
    if args.map == "pderiv":
        return lab.partial_map(args.p)
    if args.map == "deriv":
        return lab.full_map()
    if args.T is None:
        raise UsageError("--map subderiv requires -T")
    return lab.sub_map(_parse_primes(args.T))


def _run_parsed(args) -> tuple[object, Optional[lab.ProbeReport]]:
    cmd = args.command
    if cmd == "deriv":
        return {"value": _frac_str(d_full(_parse_rational(args.value)))}, None
    if cmd == "pderiv":
        return {"value": _frac_str(
            d_partial(_parse_rational(args.value), args.p))}, None
    if cmd == "subderiv":
        return {"value": _frac_str(
            d_sub(_parse_rational(args.value), _parse_primes(args.T)))}, None
    if cmd == "iterate":
        v0 = _parse_valuation(args.v, args.e)
        seq = dyn.nu_sequence(v0, args.p, args.n)
        return {"sequence": [str(v) for v in seq]}, None
    if cmd == "predict":
        v0 = _parse_valuation(args.v, args.e)
        profile = dyn.kappa_profile(v0, args.p)
        pred = dyn.predicted_inc_sequence(profile, args.p)
        steps = 200
        oracle = dyn.inc_sequence(v0, args.p, steps)
        match = pred.prefix(len(oracle)) == oracle
        return {
            "kappa0": profile.kappa0,
            "kappas": list(profile.kappas),
            "N": profile.N,
            "period": profile.period,
            "preperiod": list(pred.preperiod),
            "cycle": list(pred.cycle),
            "oracle_match": match,
        }, None
    if cmd == "classify":
        v0 = _parse_valuation(args.v, args.e)
        c = dyn.classify(v0, args.p)
        payload = {"class": c.kind}
        if c.period is not None:
            payload["period"] = c.period
        return payload, None
    if cmd == "antideriv":
        if "*" in args.value:
            y = _parse_ppf(args.value, args.p)
        else:
            y = _parse_rational(args.value)
        sols = ad.antiderivatives(y, args.p, args.e)
        if isinstance(sols, ad.ZeroAntiderivatives):
            return {"all_units_and_zero": True,
                    "description": sols.description}, None
        payload = {
            "count": len(sols),
            "solutions": [
                {
                    "valuation": str(s.valuation),
                    "k": s.k,
                    "b": _frac_str(s.b),
                    "element": _element_payload(s.element),
                    "c": s.c,
                }
                for s in sols
            ],
        }
        if args.brute_range is not None:
            try:
                lo_s, hi_s = args.brute_range.split("..")
                lo, hi = int(lo_s), int(hi_s)
            except ValueError as exc:
                raise UsageError("--brute-range expects a..b") from exc
            found = ad.brute_force_antiderivatives(
                Fraction(y) if not isinstance(y, PrimePowerForm)
                else y.materialize(), args.p, (lo, hi))
            payload["brute_force"] = [_frac_str(x) for x in found]
            in_range = {
                s.valuation.value for s in sols
                if s.valuation.value.denominator == 1
                and lo <= s.valuation.value <= hi
            }
            payload["matches_brute_force"] = (
                in_range == {Fraction(nu_int(x, args.p)) for x in found}
            )
        return payload, None
    if cmd == "construct-n":
        x0 = ad.construct_with_n_antiderivatives(args.p, args.n, args.mode)
        count = len(ad.antiderivatives(ppf_derivative(x0), args.p))
        k0 = ad.construct_k0(args.p, 2) if args.mode == "paper" else 1
        return {
            "element": str(x0),
            "b0": str(x0.exponent // args.p ** k0),
            "k0": k0,
            "mode": args.mode,
            "solver_count": count,
        }, None
    if cmd == "quad":
        return _run_quad(args)
    if cmd == "lab":
        return _run_lab(args)
    raise UsageError(f"unknown command {cmd!r}")


def _run_quad(args):
    K = qf.QuadraticField(args.D)
    if args.quad_command == "split":
        data = qf.splitting(K, args.p)
        return {"type": data.type, "e": data.e, "f": data.f, "g": data.g}, None
    if args.quad_command == "deriv":
        x = _parse_element(K, args.x)
        if args.T is None:
            out = qf.d_K(x)
        else:
            out = qf.d_K_sub(x, _parse_ideals(args.T))
        return {"a": _frac_str(out.a), "b": _frac_str(out.b), "D": args.D}, None
    if args.quad_command == "ld-image":
        G = qf.ld_image_generators(K, args.bound)
        return {
            "D": args.D,
            "bound": args.bound,
            "exceptional": {str(p): m for p, m in G.exceptional},
            "m2": G.m(2),
        }, None
    raise UsageError(f"unknown quad command {args.quad_command!r}")


def _run_lab(args):
    if args.lab_command == "continuity":
        x = _parse_rational(args.x)
        generator = args.generator
        if generator is None:
            generator = "unit" if x != 0 else "powers"
        gen = "unit-perturbation" if generator == "unit" else "power-sequence"
        base = None if args.base is None else _parse_rational(args.base)
        report = lab.continuity_probe(_map_from_args(args), x, gen, args.N,
                                      args.p, base=base)
    elif args.lab_command == "discont":
        report = lab.discontinuity_witness(_parse_primes(args.T), args.p,
                                           _parse_rational(args.x), args.N)
    elif args.lab_command == "special":
        K = qf.QuadraticField(args.D)
        report = lab.special_witness(
            K,
            _parse_ideals(args.t_ideals),
            _parse_ideal(args.focus),
            _parse_element(K, args.x),
            args.N,
        )
    elif args.lab_command == "strictdiff":
        pair_base = (None if args.pair_base is None
                     else _parse_rational(args.pair_base))
        report = lab.strict_diff_probe(_map_from_args(args),
                                       _parse_rational(args.x), args.N,
                                       args.p, pair_base=pair_base)
    else:
        raise UsageError(f"unknown lab command {args.lab_command!r}")
    if args.out_dir is not None:
        paths = write_report_files(report, args.out_dir,
                                   prefix=report.experiment)
        print("wrote " + ", ".join(sorted(paths.values())), file=sys.stderr)
    return json.loads(report_to_json(report)), report


def _payload_to_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["key", "value"])
    for key, value in payload.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        writer.writerow([key, value])
    return buf.getvalue()


def run(argv: list[str]) -> CommandResult:
    """Parse and execute one command; never raises for expected errors."""
    try:
        args = _build_parser().parse_args(_hoist_positional(list(argv)))
    except UsageError as exc:
        return CommandResult("error", {"error": str(exc)}, "usage")
    except SystemExit as exc:  # -h/--help
        return CommandResult("ok", None) if exc.code in (0, None) else \
            CommandResult("error", {"error": "usage"}, "usage")
    try:
        payload, report = _run_parsed(args)
    except UsageError as exc:
        return CommandResult("error", {"error": str(exc)}, "usage")
    except (DomainError, CapacityError, GeneratorError) as exc:
        return CommandResult("error", {"error": str(exc)},
                             type(exc).__name__)
    except SearchError as exc:
        return CommandResult("error", {"error": str(exc)}, "SearchError")
    return CommandResult("ok", payload, format=getattr(args, "format", "json"),
                         report=report)


def main(argv: Optional[list[str]] = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    if result.status == "ok":
        if result.payload is not None:
            if result.format == "csv":
                text = (report_to_csv(result.report)
                        if result.report is not None
                        else _payload_to_csv(result.payload))
                sys.stdout.write(text)
            else:
                print(json.dumps(result.payload, indent=2))
    else:
        print(json.dumps(result.payload), file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
