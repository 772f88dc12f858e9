"""Domain types and unit conventions shared by all modules.

Every rate and Rabi amplitude is dimensionless, quoted in units of a
reference rate gamma; time is measured in 1/gamma.  Propagation distance
enters only through the dimensionless optical depth ``zeta``, and the
relative strength with which the two probe transitions couple to the
medium through the dipole ratio ``dipole_ratio``.  No SI quantity appears
anywhere downstream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MoleculeParams",
    "DriveConfig",
    "Handedness",
    "DensityMatrix",
    "MediumConfig",
    "PeakRecord",
    "SpectrumResult",
    "validate_probe_condition",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MoleculeParams:
    """Relaxation rates of the closed-loop three-level system.

    ``Gamma31``, ``Gamma21``, ``Gamma32`` are population relaxation rates of
    the 3->1, 2->1 and 3->2 decay channels; ``gamma12``, ``gamma13``,
    ``gamma23`` are the corresponding coherence decay rates.  All in units
    of gamma.
    """

    Gamma31: float
    Gamma21: float
    Gamma32: float
    gamma12: float
    gamma13: float
    gamma23: float

    def __post_init__(self):
        rates = (self.Gamma31, self.Gamma21, self.Gamma32,
                 self.gamma12, self.gamma13, self.gamma23)
        if any(not math.isfinite(r) or r < 0 for r in rates):
            raise ValueError("all rates must be finite and >= 0")
        if self.Gamma31 == 0 and self.Gamma21 == 0 and self.Gamma32 == 0:
            raise ValueError("at least one population relaxation rate must be positive")

    @classmethod
    def default_closed(cls, Gamma31: float = 1.0, Gamma21: float = 1.0,
                       Gamma32: float = 1.0) -> "MoleculeParams":
        """Rates of a radiatively closed system: coherence decay is fixed by
        the population channels feeding each level pair."""
        return cls(
            Gamma31=Gamma31,
            Gamma21=Gamma21,
            Gamma32=Gamma32,
            gamma12=Gamma21 / 2.0,
            gamma13=(Gamma31 + Gamma32) / 2.0,
            gamma23=(Gamma21 + Gamma31 + Gamma32) / 2.0,
        )


@dataclass(frozen=True)
class DriveConfig:
    """Drive amplitudes, shared probe detuning and closed-loop phase.

    ``omega21_abs`` and ``omega31_abs`` are the two probe amplitudes,
    ``omega32_abs`` the control amplitude, all non-negative.  ``delta`` is
    the detuning common to both probe transitions (the control is resonant).
    ``theta`` is the total loop phase of the three drives, stored modulo
    2*pi.
    """

    omega21_abs: float
    omega31_abs: float
    omega32_abs: float
    delta: float
    theta: float = 0.0

    def __post_init__(self):
        for name in ("omega21_abs", "omega31_abs", "omega32_abs"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        wrapped = self.theta % TWO_PI
        # tiny negative inputs can round the modulo up to the period itself
        if wrapped >= TWO_PI:
            wrapped = 0.0
        object.__setattr__(self, "theta", wrapped)

    def probe_condition_holds(self) -> bool:
        """True iff the two probes enter with equal amplitude and zero loop phase."""
        return validate_probe_condition(self)


class Handedness(enum.Enum):
    """Left- or right-handed enantiomer.

    The two mirror forms differ only in the sign of the chiral transition
    dipole, which shifts the loop phase by pi.
    """

    LEFT = "left"
    RIGHT = "right"

    def effective_theta(self, theta: float) -> float:
        if self is Handedness.LEFT:
            return theta % TWO_PI
        return (theta + math.pi) % TWO_PI

    @property
    def sign(self) -> int:
        """Chirality sign: +1 for left, -1 for right."""
        return 1 if self is Handedness.LEFT else -1


@dataclass(frozen=True)
class DensityMatrix:
    """3x3 complex density matrix in the rotating frame.

    Validated at construction: Hermitian to 1e-12 entrywise, unit trace to
    1e-10, smallest eigenvalue >= -1e-9 (finite-precision solves may dip
    marginally below zero).
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("density matrix must be 3x3")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(m.trace().real - 1.0) > 1e-10 or abs(m.trace().imag) > 1e-10:
            raise ValueError("density matrix trace differs from 1")
        if np.min(np.linalg.eigvalsh(m)) < -1e-9:
            raise ValueError("density matrix has a significantly negative eigenvalue")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def sigma(self, i: int, j: int) -> complex:
        """Entry sigma_ij with physics-style 1-based level labels."""
        return complex(self.matrix[i - 1, j - 1])

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()


@dataclass(frozen=True)
class MediumConfig:
    """Composition and optical depth of the molecular medium.

    ``p_plus`` and ``p_minus`` are the left/right enantiomer fractions,
    ``zeta`` the dimensionless optical depth and ``dipole_ratio`` the ratio
    of the two probe coupling strengths entering the field propagation.
    """

    p_plus: float
    p_minus: float
    zeta: float
    dipole_ratio: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.p_plus <= 1.0 and 0.0 <= self.p_minus <= 1.0):
            raise ValueError("enantiomer fractions must lie in [0, 1]")
        if abs(self.p_plus + self.p_minus - 1.0) > 1e-12:
            raise ValueError("enantiomer fractions must sum to 1")
        if not math.isfinite(self.zeta) or self.zeta < 0:
            raise ValueError("zeta must be finite and >= 0")
        if not math.isfinite(self.dipole_ratio) or self.dipole_ratio <= 0:
            raise ValueError("dipole_ratio must be finite and > 0")

    @property
    def dp(self) -> float:
        """Enantiomeric difference p_plus - p_minus."""
        return self.p_plus - self.p_minus

    @classmethod
    def from_excess(cls, dp: float, zeta: float,
                    dipole_ratio: float = 1.0) -> "MediumConfig":
        if not -1.0 <= dp <= 1.0:
            raise ValueError("enantiomeric difference must lie in [-1, 1]")
        return cls(p_plus=(1.0 + dp) / 2.0, p_minus=(1.0 - dp) / 2.0,
                   zeta=zeta, dipole_ratio=dipole_ratio)


@dataclass(frozen=True)
class PeakRecord:
    """One characteristic absorption peak: location, raw and normalized height."""

    location: float
    height: float
    height_norm: float


@dataclass(frozen=True)
class SpectrumResult:
    """Detuning sweep output with extracted characteristic peaks.

    ``absorption_norm`` is absorption divided by the summed raw peak
    heights; ``dp_prime`` is the spectroscopic estimate of the enantiomeric
    difference, the difference of the normalized peak heights.
    """

    delta: np.ndarray
    transmission: np.ndarray
    absorption: np.ndarray
    absorption_norm: np.ndarray
    peak_plus: PeakRecord
    peak_minus: PeakRecord
    dp_prime: float

    def __post_init__(self):
        d = np.asarray(self.delta, dtype=float)
        t = np.asarray(self.transmission, dtype=float)
        # Slight over-unity transmission is legitimate: the control beam can
        # pump the probe pair through the closed interference loop.
        if not np.all(np.isfinite(t)) or np.any(t < -1e-9):
            raise ValueError("transmission must be finite and non-negative")
        hsum = self.peak_plus.height_norm + self.peak_minus.height_norm
        if hsum != 1.0:
            raise ValueError("normalized peak heights must sum to 1 exactly")
        for name, arr in (("delta", d), ("transmission", t),
                          ("absorption", np.asarray(self.absorption, float)),
                          ("absorption_norm", np.asarray(self.absorption_norm, float))):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def validate_probe_condition(drive: DriveConfig) -> bool:
    """Check the symmetric entry condition: equal probe amplitudes and zero
    loop phase (mod 2*pi), each to tolerance 1e-12."""
    a, b = drive.omega21_abs, drive.omega31_abs
    if abs(a - b) > 1e-12 * max(a, b):
        return False
    wrapped = drive.theta % TWO_PI
    return min(wrapped, TWO_PI - wrapped) <= 1e-12
