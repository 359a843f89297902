"""Exact h-adic deformation quantization: star products, skew operators,
star-product synthesis, polarizations and quantum curves."""

from .curves import HiggsChart, PlaneCurve, higgs_char_poly, quantize_plane_curve, semiclassical_check
from .operators import (
    OperatorAlgebra, OperatorError, SkewOperator, is_rees_element, op_apply, op_compose,
    op_equal_on_basis, op_normal_form,
)
from .parser import ParseError, parse_expr
from .polarization import Polarization, annihilator_kernel, kernel_agreement, polar_apply
from .series import HSeries, LaurentPoly, Var, VariableError, exp_hbar, make_vars, rational, stirling
from .star import StarAlgebra, poisson_bracket, sigma0, star_commutator, star_mul, verify_star_axioms
from .symbols import SymbolMap, phi_scaling, psi_translation, rees_symbol, verify_morphism
from .synthesis import (
    QuantizationData, psi_forward, psi_inverse, synthesis_crosscheck, synthesize_star,
    verify_quantization_conditions,
)

__version__ = "0.1.0"

__all__ = [
    "HiggsChart",
    "PlaneCurve",
    "higgs_char_poly",
    "quantize_plane_curve",
    "semiclassical_check",
    "OperatorAlgebra",
    "OperatorError",
    "SkewOperator",
    "is_rees_element",
    "op_apply",
    "op_compose",
    "op_equal_on_basis",
    "op_normal_form",
    "ParseError",
    "parse_expr",
    "Polarization",
    "annihilator_kernel",
    "kernel_agreement",
    "polar_apply",
    "HSeries",
    "LaurentPoly",
    "Var",
    "VariableError",
    "exp_hbar",
    "make_vars",
    "rational",
    "stirling",
    "StarAlgebra",
    "poisson_bracket",
    "sigma0",
    "star_commutator",
    "star_mul",
    "verify_star_axioms",
    "SymbolMap",
    "phi_scaling",
    "psi_translation",
    "rees_symbol",
    "verify_morphism",
    "QuantizationData",
    "psi_forward",
    "psi_inverse",
    "synthesis_crosscheck",
    "synthesize_star",
    "verify_quantization_conditions",
]
