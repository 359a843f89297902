"""Seeded random inputs for the property suites.

Everything is driven by an explicit ``random.Random`` so that a suite run
with a given seed is reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .series import HSeries, LaurentPoly


@dataclass(frozen=True)
class SampleSpec:
    samples: int = 100
    max_terms: int = 12
    exp_range: tuple[int, int] = (-4, 4)
    max_hpow: int = 3
    order: int = 8
    seed: int = 0

    def rng(self, salt: str = "") -> random.Random:
        return random.Random(f"{self.seed}:{salt}")


def random_rational(rng: random.Random, bound: int = 9, max_den: int = 4) -> mpq:
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    return mpq(num, rng.randint(1, max_den))


def random_exponents(rng, vars_, exp_range):
    lo, hi = exp_range
    return tuple(rng.randint(lo if v.invertible else max(lo, 0), hi) for v in vars_)


def random_poly(rng, vars_, max_terms=12, exp_range=(-4, 4)) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_exponents(rng, vars_, exp_range)] = random_rational(rng)
    return LaurentPoly(vars_, terms)


def random_series(rng, vars_, order, max_terms=12, exp_range=(-4, 4), max_hpow=3) -> HSeries:
    """A nonzero series with at most ``max_terms`` terms ``c h^k x^e``."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            k = rng.randint(0, min(max_hpow, order))
            terms[(k, random_exponents(rng, vars_, exp_range))] = random_rational(rng)
        s = HSeries(vars_, order, terms)
        if s:
            return s


def series_from_spec(rng, vars_, spec: SampleSpec) -> HSeries:
    return random_series(rng, vars_, spec.order, spec.max_terms, spec.exp_range, spec.max_hpow)


def random_operator(
    rng,
    alg,
    max_terms: int = 3,
    power_range: tuple[int, int] = (-3, 3),
    coeff_terms: int = 4,
    exp_range: tuple[int, int] = (-3, 3),
    max_hpow: int = 2,
    rees: bool = False,
):
    """A random normal-form operator in ``alg`` (an :class:`OperatorAlgebra`).

    Powers are drawn from ``power_range`` and clipped to what each generator
    admits.  With ``rees=True`` the coefficient of ``D^k`` gets an extra
    factor ``h^|k|`` so the result lies in the Rees algebra.
    """
    from .operators import INVERTIBLE_GENS, SkewOperator

    lo, hi = power_range
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        powers = []
        for g in alg.alphabet:
            if g is None:
                powers.append(0)
            elif g in INVERTIBLE_GENS and not alg.plus:
                powers.append(rng.randint(lo, hi))
            else:
                powers.append(rng.randint(max(lo, 0), hi))
        powers = tuple(powers)
        c = random_series(rng, alg.vars, alg.order, coeff_terms, exp_range, max_hpow)
        if rees:
            c = c.shift(sum(powers))
        if c:
            terms[powers] = terms[powers] + c if powers in terms else c
    return SkewOperator(alg, terms)
