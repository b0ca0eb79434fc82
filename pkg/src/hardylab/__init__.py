"""Weighted iterated Hardy-type inequalities involving suprema.

Numerical evaluation of the explicit best-constant characterizations for
the supremum operator built from a kernel pair (u, b), the restricted
inequalities on half-lines, the dual iterated Hardy/Copson inequalities,
and the generalized maximal operator between generalized Lorentz spaces --
together with independent brute-force oracles for all of them.
"""
from .axis import GridAxis, Mesh, PiecewiseFn, integrate, make_log_grid
from .constants import (ConstantReport, ExponentSet, RegimeError, TermValue,
                        eval_aux2, eval_aux3, eval_gks, eval_krepick,
                        eval_maximal_norm, eval_thm33, eval_thm34,
                        maximal_certificates, reduce_maximal)
from .functionals import (NormValue, assoc_norm_GG, norm_GG, norm_Lp,
                          norm_gamma, norm_lambda)
from .operators import apply_Tub, iterated_lhs, sup_envelope
from .oracle import (OracleResult, TestFamily, check_gluing, check_ibp,
                     oracle_assoc_norm, oracle_ratio, oracle_sinnamon)
from .rearrangement import RearrangedFn, StepFn, double_star, rearrange
from .weights import (WeightFn, as_weight, check_delta2, check_nondegenerate,
                      check_quasi_increasing, check_Qr, derive_v012,
                      load_weight_file, parse_weight_spec, primitive_B)

__version__ = "0.1.0"

__all__ = [
    "GridAxis", "Mesh", "PiecewiseFn", "integrate", "make_log_grid",
    "ConstantReport", "ExponentSet", "RegimeError", "TermValue",
    "eval_aux2", "eval_aux3", "eval_gks", "eval_krepick",
    "eval_maximal_norm", "eval_thm33", "eval_thm34",
    "maximal_certificates", "reduce_maximal",
    "NormValue", "assoc_norm_GG", "norm_GG", "norm_Lp", "norm_gamma",
    "norm_lambda",
    "apply_Tub", "iterated_lhs", "sup_envelope",
    "OracleResult", "TestFamily", "check_gluing", "check_ibp",
    "oracle_assoc_norm", "oracle_ratio", "oracle_sinnamon",
    "RearrangedFn", "StepFn", "double_star", "rearrange",
    "WeightFn", "as_weight", "check_delta2", "check_nondegenerate",
    "check_quasi_increasing", "check_Qr", "derive_v012",
    "load_weight_file", "parse_weight_spec", "primitive_B",
    "__version__",
]
