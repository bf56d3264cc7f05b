"""Exact computations with divided powers, polynomial laws, traces and
norms, zero cycles, and Chow forms over Q and prime fields."""

from .exact_algebra import (AlgebraMorphism, CharacteristicError,
                            FiniteAlgebra, GF, MultiPoly, QQ, Ring, Scalar,
                            classical_charpoly, evaluation_morphism,
                            poly_to_string, quotient_algebra, unit_vec, vec)
from .gamma import (GammaElement, SymTensor, external_product,
                    from_sym_tensor, gamma_of_vector, gamma_unit,
                    internal_product, multi_indices, shuffle_product,
                    slotwise_product, sym_oracle_product, to_sym_tensor)
from .laws import (PolyLaw, constant_law, determinant_law, is_multiplicative,
                   law_from_evaluator, law_from_homs, scale_law)
from .trace_norm import (CharPoly, DualTraceDeformation, ReducedLaw, TraceMap,
                         cayley_hamilton_reduce, char_poly, char_poly_generic,
                         is_degree_d_trace, norm_from_trace,
                         tangent_deformations, theta_k_from_norm,
                         theta_k_from_trace, theta_symbolic_from_norm,
                         trace_from_norm)
from .cycles_geometry import (BaseCocycle, Cocycle, Cycle, CycleLaw,
                              CyclePair, NormedPatch, Point,
                              PolynomialAmbient, cycle_law, cycle_trace,
                              functor_law_roundtrip, hilbert_chow,
                              norm_cocycle, norm_module, pairs_equivalent,
                              pushforward, reduce_cycle, sum_cycles,
                              tensor_cocycles)
from .chow import (ChowForm, GradedAlgebra, ProjectiveCycle, ProjectivePoint,
                   affine_chart_cycle, chow_determines_cycle, chow_form,
                   chow_multiplicativity_check)
from .verification import DEFAULT_SEED, SuiteResult, run_all, run_suite

__version__ = "0.1.0"

__all__ = [
    "AlgebraMorphism", "BaseCocycle", "CharPoly", "CharacteristicError",
    "ChowForm", "Cocycle", "Cycle", "CycleLaw", "CyclePair",
    "DualTraceDeformation", "FiniteAlgebra", "GF", "GammaElement",
    "GradedAlgebra", "MultiPoly", "NormedPatch", "Point", "PolyLaw",
    "PolynomialAmbient", "ProjectiveCycle", "ProjectivePoint", "QQ",
    "ReducedLaw", "Ring", "Scalar", "SuiteResult", "SymTensor", "TraceMap",
    "DEFAULT_SEED", "affine_chart_cycle", "cayley_hamilton_reduce",
    "char_poly", "char_poly_generic", "chow_determines_cycle", "chow_form",
    "chow_multiplicativity_check", "classical_charpoly", "constant_law",
    "cycle_law", "cycle_trace", "determinant_law", "evaluation_morphism",
    "external_product", "from_sym_tensor", "functor_law_roundtrip",
    "gamma_of_vector", "gamma_unit", "hilbert_chow", "internal_product",
    "is_degree_d_trace", "is_multiplicative", "law_from_evaluator",
    "law_from_homs", "multi_indices", "norm_cocycle", "norm_from_trace",
    "norm_module", "pairs_equivalent", "poly_to_string", "pushforward",
    "quotient_algebra", "reduce_cycle", "run_all", "run_suite", "scale_law",
    "shuffle_product", "slotwise_product", "sum_cycles",
    "sym_oracle_product", "tangent_deformations", "tensor_cocycles",
    "theta_k_from_norm", "theta_k_from_trace", "theta_symbolic_from_norm",
    "to_sym_tensor", "trace_from_norm", "unit_vec", "vec",
]
