"""Exact and high-precision verification of the recurrence coefficients of
orthogonal polynomials for the weight ``exp(-x^2) |x - t|^gamma``."""

__version__ = "0.1.0"

from .algebra import (PoleError, Poly, RatFn, Rational, bareiss_det, eval_at,  # noqa: E402
                      format_rational, poly_arith, poly_derivative, poly_gcd,
                      ratfn_arith, ratfn_derivative, to_rational)
from .genhermite import (barnes_g, gen_hermite, hankel_formula_check,  # noqa: E402
                         leading_coeff_checks, p_s, theorem2_alpha)
from .identities import VerificationReport, verify_table  # noqa: E402
from .moments import (gaussian_moment, hankel_det, recurrence_table,  # noqa: E402
                      weight_moments)
