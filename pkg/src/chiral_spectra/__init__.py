"""Chirality-resolved absorption spectroscopy of cyclic three-level molecules.

Driven-dissipative steady states per enantiomer, probe propagation through
mixed-chirality media, characteristic-peak extraction and recovery of the
enantiomeric excess from a single absorption spectrum.
"""

from .model import (DensityMatrix, DriveConfig, Handedness, MediumConfig,
                    MoleculeParams, PeakRecord, SpectrumResult,
                    validate_probe_condition)
from .errors import (DegenerateDenominator, DegenerateSpectrum, NonMonotoneCurve,
                     NumericalError, OutOfRange, QuadratureNotConverged,
                     SingularGenerator, StepTooLarge, ZeroEntryField)
from .bloch import Liouvillian, build_liouvillian, evolve, steady_state
from .analytic import (PeakHeightConstants, WeakProbeCoherences,
                       peak_height_constants, peak_heights, peak_heights_linear,
                       probe_coupling_matrix, sigma21_weak, sigma31_weak,
                       weak_probe_coherences)
from .propagation import (FieldState, absorption, propagate_full,
                          propagate_linear, transmission)
from .spectra import (CalibrationCurve, TableRow, extract_peaks, forward_curve,
                      invert_ee, sweep, table_one)
from .doppler import (DopplerConfig, averaged_coupling_matrix, averaged_sigma21,
                      averaged_spectrum, doppler_average)

__version__ = "0.1.0"

__all__ = [
    "MoleculeParams", "DriveConfig", "Handedness", "DensityMatrix",
    "MediumConfig", "PeakRecord", "SpectrumResult", "validate_probe_condition",
    "NumericalError", "SingularGenerator", "StepTooLarge",
    "DegenerateDenominator", "ZeroEntryField", "DegenerateSpectrum",
    "NonMonotoneCurve", "OutOfRange", "QuadratureNotConverged",
    "Liouvillian", "build_liouvillian", "steady_state", "evolve",
    "WeakProbeCoherences", "PeakHeightConstants", "sigma21_weak",
    "sigma31_weak", "weak_probe_coherences", "peak_height_constants",
    "peak_heights", "peak_heights_linear", "probe_coupling_matrix",
    "FieldState", "propagate_linear", "propagate_full", "transmission",
    "absorption",
    "CalibrationCurve", "TableRow", "sweep", "extract_peaks", "forward_curve",
    "invert_ee", "table_one",
    "DopplerConfig", "doppler_average", "averaged_sigma21",
    "averaged_coupling_matrix", "averaged_spectrum",
    "__version__",
]
