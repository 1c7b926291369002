"""Exception hierarchy shared by all modules."""


class GaussEvoError(Exception):
    """Base class for every error raised by the package."""


class NumericError(GaussEvoError):
    """A numerical failure (CLI exit code 2)."""


class SingularDenominator(NumericError):
    """A closed-form denominator vanished outside the regularized range."""


class PoleInM0(NumericError):
    """The m0 BCH coefficient hit a pole."""


class ImaginaryResidue(NumericError):
    """A quantity that must be real came out with a large imaginary part."""


class BlowUp(NumericError):
    """The ODE integration left the admissible range for mu."""


class SingularD22(NumericError):
    """The lower-right block of the propagated density matrix is singular."""


class SingularGamma(NumericError):
    """The stationary vector Gamma is undefined (gamma = 0 or gamma**2 = omega**2)."""


class MatrixExpOverflow(NumericError):
    """The matrix exponential overflowed."""


class NonNormalizable(GaussEvoError):
    """A Wigner function was requested for mu + nu <= 0."""


class NonUnitTheta(GaussEvoError):
    """A projector was given a direction with theta_hat . theta_hat != 1."""


class DomainViolation(GaussEvoError, ValueError):
    """Coefficients or class parameters lie outside their admissible domain."""


class UnsupportedRealization(GaussEvoError):
    """The two-operator real CP realization requires eta2 == 0."""


class NoSignChange(GaussEvoError):
    """A bisection bracket does not straddle a root."""


class ConfigError(GaussEvoError):
    """Malformed or incomplete scenario configuration (CLI exit code 1)."""
