"""Exact and high-precision computation of the conjectured moment
polynomial coefficients for quadratic Dirichlet L-functions and for
quadratic twists of the conductor-11 elliptic curve."""

from .algebra import PrecReal, Poly, binomial, falling_factorial, interpolate, poly_eval
from .arithfactors import (ELLIPTIC_11A, QUADRATIC_MINUS, QUADRATIC_PLUS,
                           BCoeffTable, FamilySpec, arithmetic_factor, b_coeffs)
from .detkernel import d_lambda_bruteforce, p_lambda, p_lambda_y, p_lambda_z
from .moments import (MomentPolynomial, averaged_polynomial, c0, c_coeff,
                      identity_checks, q_polynomial, residue_oracle)
from .nlambda import n_lambda, n_lambda_direct
from .partitions import Partition, chi_degree, conjugate, enumerate_partitions, r_lambda

__version__ = "0.1.0"

__all__ = [
    "PrecReal", "Poly", "binomial", "falling_factorial", "interpolate",
    "poly_eval", "FamilySpec", "BCoeffTable", "QUADRATIC_PLUS",
    "QUADRATIC_MINUS", "ELLIPTIC_11A", "arithmetic_factor", "b_coeffs",
    "d_lambda_bruteforce", "p_lambda", "p_lambda_y", "p_lambda_z",
    "MomentPolynomial", "averaged_polynomial", "c0", "c_coeff",
    "identity_checks", "q_polynomial", "residue_oracle", "n_lambda",
    "n_lambda_direct", "Partition", "chi_degree", "conjugate",
    "enumerate_partitions", "r_lambda",
]
