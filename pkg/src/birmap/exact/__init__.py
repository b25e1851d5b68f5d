"""Exact scalars, polynomials and rational functions over Q(i)."""

from birmap.exact.gaussian import I, ONE, ZERO, GaussianRational, as_gaussian, format_scalar, gaussian_sqrt, parse_scalar
from birmap.exact.gcd import backend, get_backend, poly_gcd, poly_gcd_many, poly_lcm, set_backend
from birmap.exact.parse import parse_expr, parse_poly
from birmap.exact.poly import PROJ, XY, Z, MultiPoly, render_poly
from birmap.exact.ratfunc import RationalFunction, reduce_fraction

__all__ = [
    "GaussianRational", "MultiPoly", "RationalFunction",
    "parse_scalar", "format_scalar", "as_gaussian", "gaussian_sqrt",
    "poly_gcd", "poly_gcd_many", "poly_lcm", "reduce_fraction",
    "parse_expr", "parse_poly", "render_poly",
    "set_backend", "get_backend", "backend",
    "XY", "PROJ", "Z", "I", "ONE", "ZERO",
]
