"""
Exception hierarchy for the paraboloid numerics
"""


class ParaboloidError(Exception):
    """Base class of every error raised by the numerics package"""


class DomainError(ParaboloidError, ValueError):
    """Input lies outside the domain where a formula is defined"""


class InvalidDensity(DomainError):
    """Relative density outside the open interval (0, 1)"""


class PoleError(DomainError):
    """The normalized equilibrium function is evaluated at a zero of f"""


class DegenerateError(ParaboloidError, ValueError):
    """A quantity needed for a quotient vanishes (for example an empty submerged part)"""


class ConvergenceError(ParaboloidError, RuntimeError):
    """An iterative polish did not reach the requested residual"""


class ProbeError(ParaboloidError, RuntimeError):
    """The degenerate third-derivative probe could not be evaluated"""


class StencilError(ParaboloidError, RuntimeError):
    """A finite-difference stencil point left the domain of the function"""


class ToleranceError(ParaboloidError, RuntimeError):
    """Adaptive quadrature exhausted its evaluation budget"""
