"""certreal: exact computable reals with certified analysis on top.

Subpackages follow the layers of the construction: exact rationals
(`rat`), computable reals (`creal`), certified series (`series`), the
uniformly continuous function calculus (`ucfun`), Riemann quadrature
(`quadrature`), the quasi-formal power-series engine (`fps`), the
transcendence verifiers (`transcendence`) and the staircase
counter-example (`northeast`).
"""

from .creal import CReal, Comparison, SeparationWitness, compare, creal_sum, render
from .errors import CertrealError, DomainError, PrecisionError, ResourceCapError
from .rat import RatInterval, binomial, factorial, format_rational, parse_rational

__all__ = [
    "CReal", "Comparison", "SeparationWitness", "compare", "creal_sum",
    "render", "CertrealError", "DomainError", "PrecisionError",
    "ResourceCapError", "RatInterval", "binomial", "factorial",
    "format_rational", "parse_rational",
]

__version__ = "0.1.0"
