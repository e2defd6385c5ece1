"""Error taxonomy.

Two categories drive the command-line exit codes: "validation" for bad or
out-of-domain inputs (exit 1) and "numerical" for computations that started
but could not be completed reliably (exit 2).
"""


class SpinwallError(Exception):
    """Base class; `category` is either "validation" or "numerical"."""

    category = "validation"


class PoleAtAnisotropyField(SpinwallError):
    """Boundary-curve formulas divide by h -+ mu; raised at the poles."""


class NotMonostable(SpinwallError):
    """Spreading predictions require the corresponding monostable regime."""


class NotBistable(SpinwallError):
    """Standing-wall heuristics require both rest states stable."""


class LogDomain(SpinwallError):
    """Logarithm argument left its domain in a potential evaluation."""


class EllipticityViolated(SpinwallError):
    """Leading coefficients fail the ellipticity predicate."""


class DegenerateLeadingCoefficient(SpinwallError):
    """A quadratic factor of the dispersion relation lost its leading term."""


class ZeroVector(SpinwallError):
    """Pointwise renormalization hit a zero magnetization vector."""


class SingularProfile(SpinwallError):
    """No interior window with sin(theta) bounded away from zero."""


class NumericalError(SpinwallError):
    category = "numerical"


class IndexUnstable(NumericalError):
    """Morse index changed between evaluation radii."""


class PathAmbiguous(NumericalError):
    """Root continuation met another collision; pinching undecidable."""


class SolverFailure(NumericalError):
    """Time integration blew up or an internal cross-check disagreed."""


class DegenerateGram(NumericalError):
    """Freezing phase conditions degenerated (profile near constant)."""


class IntegrationOverflow(NumericalError):
    """Rescaling could not keep the compound flow finite."""


class SubspaceDegenerate(NumericalError):
    """Asymptotic eigenvector construction failed its residual check."""


class PhaseUnresolved(NumericalError):
    """Contour phase increments stayed too coarse after refinement."""
