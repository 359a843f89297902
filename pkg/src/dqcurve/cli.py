"""Command-line front end.

Exit codes: 0 success, 1 parse or usage error, 2 domain error (a
precondition failed), 3 a verification found a counterexample.
"""

from __future__ import annotations

import argparse
import json
import sys

from .curves import LAYOUTS, CurveError, HiggsChart, PlaneCurve, higgs_char_poly, quantize_plane_curve
from .operators import OperatorAlgebra, SkewOperator, op_normal_form
from .parser import OperatorContext, ParseError, SeriesContext, evaluate, parse_expr, parse_poly
from .polarization import POLARIZATIONS, Polarization, annihilator_kernel, polar_apply
from .series import HSeries, LaurentPoly, Var
from .serialize import (
    DocumentError, dumps, operator_from_doc, operator_to_doc, operator_to_text, poly_to_text,
    series_from_doc, series_to_doc, series_to_text, vars_from_doc,
)
from .star import StarAlgebra, star_commutator, star_mul
from .suites import SUITES, run_suite
from .synthesis import BUILTIN_DATA, QuantizationData, synthesis_crosscheck, verify_quantization_conditions

__all__ = ["main", "run_command", "format_output"]


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, output):
        super().__init__("verification failed")
        self.output = output


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- output ------------------------------------------------------------------

def curve_to_doc(curve: PlaneCurve) -> dict:
    return series_to_doc(HSeries.from_poly(curve.poly, 0))


def format_output(value, fmt: str = "json", order=None) -> str:
    """Serialize a module value: canonical JSON, or text for people."""
    if isinstance(value, HSeries):
        return dumps(series_to_doc(value)) if fmt == "json" else series_to_text(value, order)
    if isinstance(value, SkewOperator):
        return dumps(operator_to_doc(value)) if fmt == "json" else operator_to_text(value)
    if isinstance(value, PlaneCurve):
        return dumps(curve_to_doc(value)) if fmt == "json" else poly_to_text(value.poly)
    if isinstance(value, LaurentPoly):
        return format_output(HSeries.from_poly(value, 0), fmt)
    if fmt == "json":
        return dumps(value)
    if isinstance(value, dict) and "lines" in value:
        return "\n".join(value["lines"])
    return json.dumps(value, indent=2)


# -- helpers -----------------------------------------------------------------

def _series(text, ctx):
    return evaluate(parse_expr(text, ctx), ctx)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})", exc.pos) from exc


def _curve_from_doc(doc) -> PlaneCurve:
    poly = series_from_doc(doc).sigma0()
    if "base" in doc and "fiber" in doc:
        return PlaneCurve(poly, doc["base"], doc["fiber"])
    for vars_, base, fiber, _ in LAYOUTS.values():
        if poly.vars == vars_:
            return PlaneCurve(poly, base, fiber)
    if len(poly.vars) == 2:
        return PlaneCurve(poly, poly.vars[0].name, poly.vars[1].name)
    raise CurveError(f"cannot read a plane curve over {poly.vars}")


def _chart_from_doc(doc) -> HiggsChart:
    try:
        var = doc["var"]
        var = Var(var, False) if isinstance(var, str) else vars_from_doc([var])[0]
        entries = []
        for row in doc["entries"]:
            out = []
            for p in row:
                if isinstance(p, str):
                    out.append(parse_poly(p, (var,)))
                else:
                    out.append(series_from_doc(p).sigma0())
            entries.append(out)
        chart = HiggsChart(entries)
        if "rank" in doc and int(doc["rank"]) != chart.rank:
            raise CurveError(f"rank {doc['rank']} does not match a {chart.rank}x{chart.rank} matrix")
        return chart
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed Higgs chart document: {exc}") from exc


def _data_from_doc(doc, degree) -> QuantizationData:
    try:
        A = tuple(operator_from_doc(d) for d in doc["A"])
        B = tuple(operator_from_doc(d) for d in doc["B"])
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"malformed quantization data: {exc}") from exc
    return QuantizationData(doc.get("name", "file"), A, B, degree)


def _operator_for(pol: Polarization, text: str, order: int):
    ctx = OperatorContext(pol.operator_algebra(order))
    return evaluate(parse_expr(text, ctx), ctx)


# -- commands ----------------------------------------------------------------

def cmd_mul(args):
    alg = StarAlgebra.parse(args.algebra)
    ctx = SeriesContext.star(alg, args.order)
    f, g = _series(args.f, ctx), _series(args.g, ctx)
    return star_mul(alg, f, g), alg.normal_order


def cmd_commutator(args):
    alg = StarAlgebra.parse(args.algebra)
    ctx = SeriesContext.star(alg, args.order)
    return star_commutator(alg, _series(args.f, ctx), _series(args.g, ctx)), alg.normal_order


def cmd_nf(args):
    alg = OperatorAlgebra.parse(args.tag, args.order)
    ctx = OperatorContext(alg)
    return op_normal_form(evaluate(parse_expr(args.word, ctx), ctx)), None


def _acting(args, pol):
    if args.operator:
        return _operator_for(pol, args.element, args.order)
    return _series(args.element, SeriesContext.star(pol.ambient, args.order))


def cmd_apply(args):
    pol = Polarization(args.polarization)
    f = _series(args.f, SeriesContext(pol.vars, args.order))
    return polar_apply(pol, _acting(args, pol), f), None


def cmd_kernel(args):
    pol = Polarization(args.polarization)
    basis = annihilator_kernel(_acting(args, pol), pol, args.degree, args.order)
    if args.format == "json":
        return [series_to_doc(b) for b in basis], None
    return {"lines": [series_to_text(b) for b in basis] or ["(empty)"]}, None


def cmd_synth_check(args):
    if args.data_file:
        data = _data_from_doc(_read_json(args.data_file), args.degree)
        closed = args.closed_form
        if closed is None:
            raise UsageError("--closed-form is required with --data-file")
    else:
        make, default = BUILTIN_DATA[args.data]
        data = make(args.degree, args.order)
        closed = args.closed_form or default
    cond = verify_quantization_conditions(data)
    report = synthesis_crosscheck(data, StarAlgebra.parse(closed), args.degree, args.order)
    doc = {
        "data": data.name,
        "closed_form": StarAlgebra.parse(closed).tag,
        "conditions": cond.failures,
        "checked": report.checked,
        "mismatches": report.failures,
    }
    if args.format == "text":
        doc = {"lines": [cond.summary(), report.summary()]
               + [f"mismatch {m['pair']}" for m in report.failures[:10]]}
    if cond.failures or report.failures:
        raise VerificationFailed(doc)
    return doc, None


def cmd_quantize(args):
    curve = _curve_from_doc(_read_json(args.curve))
    return quantize_plane_curve(curve, args.target, args.order, square=args.square), None


def cmd_charpoly(args):
    return higgs_char_poly(_chart_from_doc(_read_json(args.chart)), args.fiber), None


def cmd_verify(args):
    res = run_suite(args.suite, args.seed)
    doc = res.to_doc()
    if args.format == "text":
        doc = {"lines": [f"{res.name}: {'pass' if res.passed else 'FAIL'}"] + res.lines}
    if not res.passed:
        raise VerificationFailed(doc)
    return doc, None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=6, help="truncation order N (default 6)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled verifications")

    p = _Parser(prog="dqcurve", description="Exact deformation quantization toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    algebras = "moyal:<n>, qtorus, mixed, mixed_op"
    for name, func, help_ in (("mul", cmd_mul, "star product f * g"),
                              ("commutator", cmd_commutator, "star commutator [f, g]")):
        sp = add(name, func, help_)
        sp.add_argument("--algebra", required=True, help=algebras)
        sp.add_argument("f")
        sp.add_argument("g")

    sp = add("nf", cmd_nf, "normal form of an operator word")
    sp.add_argument("--tag", required=True, help="weyl[:n], rees[:n], scaling[+], translation[+]")
    sp.add_argument("word")

    for name, func, help_ in (("apply", cmd_apply, "act on a base function"),
                              ("kernel", cmd_kernel, "degree-bounded annihilator kernel")):
        sp = add(name, func, help_)
        sp.add_argument("--polarization", required=True, choices=POLARIZATIONS)
        sp.add_argument("--operator", action="store_true",
                        help="read the element as a base operator instead of an ambient series")
        sp.add_argument("element")
        if name == "apply":
            sp.add_argument("f")
        else:
            sp.add_argument("--degree", type=int, default=6)

    sp = add("synth-check", cmd_synth_check, "synthesized vs closed-form star product")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--data", choices=sorted(BUILTIN_DATA), default="qtorus")
    src.add_argument("--data-file")
    sp.add_argument("--closed-form", help=algebras)
    sp.add_argument("--degree", type=int, default=3)

    sp = add("quantize", cmd_quantize, "quantum curve of a plane curve")
    sp.add_argument("--target", required=True, choices=tuple(LAYOUTS))
    sp.add_argument("--square", action="store_true", help="quantize the square of the curve")
    sp.add_argument("curve")

    sp = add("charpoly", cmd_charpoly, "spectral curve det(xi - phi) of a Higgs chart")
    sp.add_argument("--fiber", default="xi")
    sp.add_argument("chart")

    sp = add("verify", cmd_verify, "run a named property suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    return p


def run_command(argv) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout, stderr)``."""
    try:
        args = build_parser().parse_args(argv)
        if args.order < 0:
            raise UsageError("--order must be non-negative")
        value, order = args.func(args)
        return 0, format_output(value, args.format, order), ""
    except UsageError as exc:
        return 1, "", str(exc)
    except ParseError as exc:
        return 1, "", f"parse error: {exc}"
    except DocumentError as exc:
        return 1, "", f"bad input document: {exc}"
    except VerificationFailed as exc:
        return 3, format_output(exc.output, args.format), "verification failed"
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        return 2, "", f"error: {exc}"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] in ("-h", "--help") or not argv:
        build_parser().print_help()
        return 0 if argv else 1
    try:
        code, out, err = run_command(argv)
    except SystemExit as exc:  # --help inside a subcommand
        return int(exc.code or 0)
    if out:
        sys.stdout.write(out + "\n")
    if err:
        sys.stderr.write(err.rstrip("\n").splitlines()[0] + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
