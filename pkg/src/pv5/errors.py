"""Exception types raised by the library.

Every error that a caller can act on has its own class; all inherit from
Pv5Error so `except Pv5Error` catches library failures without masking bugs.
"""


class Pv5Error(Exception):
    """Base class for all library errors."""


class ZeroSigma(Pv5Error):
    """Power-type seed requested with sigma = 0."""


class InconsistentKind(Pv5Error):
    """Log-type seed kind incompatible with theta_inf."""


class SingularT(Pv5Error):
    """Taylor-type seed with singular similarity matrix."""


class ResonantSigma(Pv5Error):
    """A divisor n + sigma*m fell below the resonance threshold."""


class DegenerateSigma(Pv5Error):
    """Sequence operation requires Im(sigma) != 0."""


class PoleArgument(Pv5Error):
    """Digamma evaluated at a nonpositive integer."""


class ExcludedParameters(Pv5Error):
    """Parameters violate the admissibility conditions of the family."""


class EqualThetaSquares(Pv5Error):
    """Normalization requires theta0**2 != thetax**2."""


class ZeroDenominator(Pv5Error):
    """Closed-form rational expression hit a vanishing denominator."""


class DegenerateGamma(Pv5Error):
    """Continuation factor gamma(sigma, nu) is 0 or infinite."""


class ConditionViolated(Pv5Error):
    """A hypothesis of a singularity-sequence statement fails.

    The message names the violated hypothesis.
    """


class NoConvergence(Pv5Error):
    """Newton refinement did not converge within the iteration budget."""


class WrongBasin(Pv5Error):
    """Newton refinement left the basin of the predicted root."""


class UnsupportedSigma(Pv5Error):
    """Connection matrix requested for a nonzero integer sigma."""


class UnhandledResonance(Pv5Error):
    """Hypergeometric parameters fall outside all implemented cases."""


class AmbiguousCase(Pv5Error):
    """Input sits on the detection boundary between two formula branches."""


class ZeroR(Pv5Error):
    """Gauge conjugation with r = 0."""


class StepUnderflow(Pv5Error):
    """Adaptive integrator step size collapsed (near a singularity?)."""


class BadFrameFit(Pv5Error):
    """Frame-matching residual exceeded the acceptance threshold."""


class SingularValueApproach(Pv5Error):
    """Painleve integration approached y in {0, 1, inf}."""

    def __init__(self, message, where=None, which=None):
        super().__init__(message)
        self.where = where
        self.which = which


class OutOfDomain(Pv5Error):
    """Evaluation point lies in no representation domain of the handle."""


class SingularValue(Pv5Error):
    """Residual formula evaluated at a singular value y in {0, 1}."""


class ZeroA(Pv5Error):
    """Taylor family '+' requires a != 0."""


class SchemaError(Pv5Error):
    """CLI configuration violates the command schema."""
