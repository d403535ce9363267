"""Möbius-transformed trapezoidal rule for integrals against polynomial weights."""

from .convergence import (ConvergenceStudy, Regime, SmoothnessSpec, SweepPoint, fit_rate,
                          predict_rate_experiment, predict_rate_theorem, run_sweep)
from .exprparse import eval_expr, parse, to_source
from .mobius import MobiusMap
from .quadrature import (Integrand, NodeSet, QuadratureRule, integrate, make_nodes, make_rule,
                         transform_integrand)
from .reference import ReferenceResult, exact_moment, reference_integral
from .weightfn import (Polynomial, PolynomialWeight, envelope_ratio, eval_weight, make_omega,
                       make_weight, weight_derivative)

__version__ = "0.1.0"
