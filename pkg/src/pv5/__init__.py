"""Series solutions of the fifth Painleve equation near x = 0, their
analytic continuation and singularity sequences, and the monodromy data of
the associated rank-2 linear system, with independent numerical checks."""

from .cover import CoverPoint, DomainKind, DomainSpec, SpiralCurve, cover_pow, in_domain, spiral_solve
from .specfun import GammaValue, digamma, gamma, psi_over_gamma, rgamma
from .theta import Theta

__all__ = [
    "CoverPoint",
    "DomainKind",
    "DomainSpec",
    "SpiralCurve",
    "cover_pow",
    "in_domain",
    "spiral_solve",
    "GammaValue",
    "digamma",
    "gamma",
    "psi_over_gamma",
    "rgamma",
    "Theta",
]
