"""Two-variable Bernstein-Szego orthogonal polynomial systems.

Builds orthonormal polynomial systems in the total-degree,
lexicographical and reverse-lexicographical orderings for measures of
the form sqrt(1-x^2) sqrt(1-y^2) / |h(e^{i theta}, y)|^2 on the square,
extracts their block recurrence matrices, and certifies every closed
form against an independent quadrature oracle.
"""

from .moment_oracle import MomentOracle, gram_schmidt, moment, oracle_for, univariate_moment
from .ortho import LEX, REVLEX, TOTAL, OrthoSystem
from .poly_core import BivariatePoly, UnivariatePoly
from .weights import (
    WeightSpec,
    chebyshev_spec,
    generic_spec,
    is_stable,
    product_spec,
    spec_from_config,
    spec_to_config,
)

__all__ = [
    "BivariatePoly",
    "LEX",
    "MomentOracle",
    "OrthoSystem",
    "REVLEX",
    "TOTAL",
    "UnivariatePoly",
    "WeightSpec",
    "chebyshev_spec",
    "generic_spec",
    "gram_schmidt",
    "is_stable",
    "moment",
    "oracle_for",
    "product_spec",
    "spec_from_config",
    "spec_to_config",
    "univariate_moment",
]

__version__ = "0.1.0"
