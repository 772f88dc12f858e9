"""Exception hierarchy for numerical failure modes.

Configuration mistakes (bad rates, inconsistent fractions, malformed input)
raise plain ValueError from the type constructors; the classes here mark
failures of the numerics themselves, so batch callers can tell the two
apart.
"""


class NumericalError(Exception):
    """Base class for numerical failures (as opposed to bad configuration)."""


class SingularGenerator(NumericalError):
    """The relaxation generator has no unique steady state."""


class StepTooLarge(NumericalError):
    """A fixed-step integration left the physically admissible region."""


class DegenerateDenominator(NumericalError):
    """The weak-probe response denominator is numerically zero."""


class ZeroEntryField(NumericalError):
    """Transmission is undefined for a probe that vanishes at entry."""


class DegenerateSpectrum(NumericalError):
    """Both characteristic peaks are numerically zero; heights cannot be normalized."""


class NonMonotoneCurve(NumericalError):
    """A calibration curve violates strict monotonicity."""


class OutOfRange(NumericalError):
    """A measured value lies outside the range of the calibration curve."""


class QuadratureNotConverged(NumericalError):
    """Doubling the quadrature order still changes the velocity average."""
