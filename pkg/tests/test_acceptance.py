"""The ten acceptance criteria, each run exactly as stated with its time limit.

Run under pytest (a pass/fail line per criterion appears in the terminal
summary) or directly: ``python tests/test_acceptance.py``.
"""

import functools
import json
import random
import sys
import time
from pathlib import Path

from dqcurve.cli import format_output, run_command
from dqcurve.operators import OperatorAlgebra
from dqcurve.parser import SeriesContext, parse_operator, parse_series
from dqcurve.sampling import random_operator, random_series
from dqcurve.serialize import operator_from_doc, series_from_doc
from dqcurve.star import ALGEBRAS, StarAlgebra
from dqcurve.suites import run_suite

GOLDEN = Path(__file__).parent / "golden"
RESULTS = []


def criterion(number, title, limit):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            ok, detail = False, ""
            try:
                fn()
                ok = True
            except AssertionError as exc:
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                raise
            finally:
                elapsed = time.perf_counter() - start
                timely = elapsed < limit
                if ok and not timely:
                    detail = f"took {elapsed:.1f}s, limit {limit}s"
                RESULTS.append((number, title, ok and timely, elapsed, limit, detail))
            assert timely, f"criterion {number} took {elapsed:.1f}s (limit {limit}s)"
        return run
    return wrap


def report_lines():
    lines = []
    for number, title, ok, elapsed, limit, detail in sorted(RESULTS):
        status = "PASS" if ok else "FAIL"
        tail = f" ({detail})" if detail else ""
        lines.append(f"[{status}] {number:2d}. {title}: {elapsed:.2f}s / {limit}s{tail}")
    return lines


def _suite(name):
    res = run_suite(name, seed=0)
    assert res.passed, json.dumps(res.failures[:2], default=str)[:500]
    return res


@criterion(1, "star axioms (unit, bilinearity, sigma0) on 100 pairs, N=8", 10)
def test_criterion_01_star_axioms():
    _suite("star-axioms")


@criterion(2, "associativity on 100 triples per algebra, N=8", 60)
def test_criterion_02_associativity():
    _suite("associativity")


@criterion(3, "quantum torus commutation x2*x1 = exp(h) x1*x2, N=10", 1)
def test_criterion_03_qtorus_commutation():
    _suite("qtorus-commutation")


@criterion(4, "Poisson brackets, antisymmetry and Leibniz on 50 pairs", 5)
def test_criterion_04_poisson():
    _suite("poisson")


@criterion(5, "synthesized products match closed forms, |e| <= 3, N=6; corrupted data detected", 60)
def test_criterion_05_synthesis():
    res = _suite("synthesis")
    assert any("corrupted" in line and line.startswith("ok") for line in res.lines)


@criterion(6, "normal forms of 200 words sound and separated on x^p, p <= 12", 20)
def test_criterion_06_normal_forms():
    _suite("normal-form")


@criterion(7, "symbol maps multiplicative on 100 operator pairs, N=8", 30)
def test_criterion_07_morphisms():
    _suite("morphism")


@criterion(8, "quantize round trip on 50 curves per target; Airy chart and kernels", 10)
def test_criterion_08_quantize():
    _suite("quantize")


@criterion(9, "direct and embedded kernels agree on 20 scaling operators, D=6, N=6", 30)
def test_criterion_09_kernel_agreement():
    _suite("kernel-agreement")


GOLDEN_CASES = [
    ("mul_qtorus.json", ["mul", "--algebra", "qtorus", "--order", "2", "x2", "x1"]),
    ("nf_scaling.json", ["nf", "--tag", "scaling", "S*x*Sinv"]),
    ("quantize_airy.json", ["quantize", "--target", "weyl", str(GOLDEN / "airy_curve.json")]),
]


def _round_trip_values(count=100, order=6):
    rng = random.Random("acceptance:round-trip")
    op_algebras = [OperatorAlgebra.scaling(order), OperatorAlgebra.translation(order),
                   OperatorAlgebra.weyl(1, order), OperatorAlgebra.weyl(2, order)]
    for i in range(count):
        if i % 2:
            alg = ALGEBRAS[rng.randrange(len(ALGEBRAS))]
            yield alg, random_series(rng, alg.vars, order)
        else:
            alg = op_algebras[rng.randrange(len(op_algebras))]
            yield alg, random_operator(rng, alg)


@criterion(10, "CLI golden bytes for three examples; round trip on 100 random values", 5)
def test_criterion_10_cli_determinism():
    for name, argv in GOLDEN_CASES:
        code, out, err = run_command(argv)
        assert code == 0, err
        assert (out + "\n").encode() == (GOLDEN / name).read_bytes(), f"{name} differs"
    for alg, value in _round_trip_values():
        if isinstance(alg, StarAlgebra):
            text = format_output(value, "text", alg.normal_order)
            assert parse_series(text, SeriesContext.star(alg, value.order)) == value, text
            assert series_from_doc(json.loads(format_output(value))) == value
        else:
            assert parse_operator(format_output(value, "text"), alg) == value
            assert operator_from_doc(json.loads(format_output(value))) == value


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print("\n".join(report_lines()))
    sys.exit(1 if failed else 0)
