"""Closed-form weak-probe response and characteristic peak heights.

These expressions are first order in the probe amplitudes and serve two
purposes: fast evaluation of spectra in the weak-probe regime, and
independent oracles for the numerical steady-state and propagation
solvers.  The probe coherence splits into a transparency term, identical
for both enantiomers, and a parametric term whose sign tracks handedness;
their interference at detunings of half the control amplitude produces
one absorption peak per enantiomer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegenerateDenominator
from .model import DriveConfig, MediumConfig, MoleculeParams

__all__ = [
    "WeakProbeCoherences",
    "PeakHeightConstants",
    "sigma21_weak",
    "sigma31_weak",
    "weak_probe_coherences",
    "peak_height_constants",
    "peak_heights",
    "peak_heights_linear",
    "probe_coupling_matrix",
]


@dataclass(frozen=True)
class WeakProbeCoherences:
    """First-order probe coherences of one enantiomer and their shared denominator."""

    sigma21: complex
    sigma31: complex
    Z: complex


@dataclass(frozen=True)
class PeakHeightConstants:
    """Dimensionless combinations controlling the two-peak propagation solution.

    A is the dipole ratio, B its discriminant-like combination with the
    enantiomeric difference, and C, D the decay and splitting exponents per
    unit optical depth.
    """

    A: float
    B: float
    C: float
    D: float

    def __post_init__(self):
        if self.B < 0:
            raise ValueError("B must be >= 0")
        if not (self.C >= self.D >= 0):
            raise ValueError("constants must satisfy C >= D >= 0")


def _lambdas(mol: MoleculeParams, delta: float, shift21, shift31):
    l21 = mol.gamma12 - 1j * (delta + shift21)
    l31 = mol.gamma13 - 1j * (delta + shift31)
    return l21, l31


def _denominator(mol, drive, shift21, shift31):
    l21, l31 = _lambdas(mol, drive.delta, shift21, shift31)
    Z = 0.25 * drive.omega32_abs ** 2 + l21 * l31
    if np.min(np.abs(Z)) < 1e-14:
        raise DegenerateDenominator("weak-probe denominator numerically zero")
    return l21, l31, Z


def _check_sign(chirality_sign: int):
    if chirality_sign not in (1, -1):
        raise ValueError("chirality_sign must be +1 or -1")


def sigma21_weak(mol: MoleculeParams, drive: DriveConfig, chirality_sign: int,
                 shift21: float = 0.0, shift31: float = 0.0) -> complex:
    """First-order coherence on the 2-1 probe transition.

    ``chirality_sign`` is +1 for the left-handed molecule and -1 for the
    right-handed one.  Optional detuning shifts displace the two probe
    resonances independently (used for velocity-class averaging).
    """
    _check_sign(chirality_sign)
    l21, l31, Z = _denominator(mol, drive, shift21, shift31)
    eit = 1j * l31 * drive.omega21_abs / (2.0 * Z)
    para = -drive.omega31_abs * drive.omega32_abs * np.exp(1j * drive.theta) / (4.0 * Z)
    return eit + chirality_sign * para


def sigma31_weak(mol: MoleculeParams, drive: DriveConfig, chirality_sign: int,
                 shift21: float = 0.0, shift31: float = 0.0) -> complex:
    """First-order coherence on the 3-1 probe transition.

    The conjugated loop-phase factor on the parametric term is fixed by
    requiring the enantiomer-weighted mixture to reproduce the coupled
    two-probe propagation coefficients exactly.
    """
    _check_sign(chirality_sign)
    l21, l31, Z = _denominator(mol, drive, shift21, shift31)
    eit = 1j * l21 * drive.omega31_abs / (2.0 * Z)
    para = -drive.omega21_abs * drive.omega32_abs * np.exp(-1j * drive.theta) / (4.0 * Z)
    return eit + chirality_sign * para


def weak_probe_coherences(mol: MoleculeParams, drive: DriveConfig,
                          chirality_sign: int, shift21: float = 0.0,
                          shift31: float = 0.0) -> WeakProbeCoherences:
    _check_sign(chirality_sign)
    l21, l31, Z = _denominator(mol, drive, shift21, shift31)
    return WeakProbeCoherences(
        sigma21=sigma21_weak(mol, drive, chirality_sign, shift21, shift31),
        sigma31=sigma31_weak(mol, drive, chirality_sign, shift21, shift31),
        Z=complex(Z),
    )


def peak_height_constants(mol: MoleculeParams,
                          medium: MediumConfig) -> PeakHeightConstants:
    A = medium.dipole_ratio
    dp = medium.dp
    B = (1.0 - A) ** 2 + 4.0 * A * dp * dp
    g = mol.Gamma21 / (2.0 * (mol.gamma12 + mol.gamma13))
    return PeakHeightConstants(A=A, B=B, C=g * (1.0 + A + math.sqrt(B)),
                               D=g * math.sqrt(B))


def _peak_heights_eq(Gamma21, gamma12, gamma13, zeta, dp, A,
                     force_series=False):
    """Closed-form peak heights under the strong-control approximation.

    The raw expression carries a 0/0 at B -> 0 (symmetric dipoles, racemic
    mixture); factoring sqrt(B) out of the bracket leaves the difference
    quotient expm1(Dz)/Dz, replaced by its second-order series when the
    argument underflows (or when forced, to test branch continuity).
    """
    g = Gamma21 / (2.0 * (gamma12 + gamma13))
    B = (1.0 - A) ** 2 + 4.0 * A * dp * dp
    sB = math.sqrt(B)
    Dz = g * sB * zeta
    if force_series or abs(Dz) < 1e-8:
        em1x = 1.0 + Dz / 2.0 + Dz * Dz / 6.0
    else:
        em1x = math.expm1(Dz) / Dz
    eD = math.exp(Dz)
    eC = math.exp(-g * (1.0 + A + sB) * zeta)
    heights = []
    for sgn in (1.0, -1.0):
        coef = (1.0 - A) + sgn * 2.0 * dp
        bracket = -g * zeta * coef * em1x + 1.0 + eD
        heights.append(1.0 - 0.25 * eC * bracket * bracket)
    return heights[0], heights[1]


def peak_heights(mol: MoleculeParams, medium: MediumConfig, *,
                 omega32_abs: float | None = None,
                 exact_lambda: bool = False):
    """Characteristic absorption heights (h_plus, h_minus) after depth zeta.

    Default: closed form in the strong-control limit, where the control
    amplitude drops out entirely.  With ``exact_lambda=True`` the probe
    coupling matrix is evaluated at the exact complex detunings of the two
    characteristic points (requires ``omega32_abs``) and exponentiated; the
    difference between the two quantifies the finite-control correction.
    """
    if not exact_lambda:
        return _peak_heights_eq(mol.Gamma21, mol.gamma12, mol.gamma13,
                                medium.zeta, medium.dp, medium.dipole_ratio)
    if omega32_abs is None:
        raise ValueError("exact_lambda evaluation requires omega32_abs")
    entry = np.array([1.0, 1.0], dtype=complex)
    heights = []
    for sgn in (1, -1):
        drive = DriveConfig(omega21_abs=0.0, omega31_abs=0.0,
                            omega32_abs=omega32_abs,
                            delta=-sgn * omega32_abs / 2.0, theta=0.0)
        G = probe_coupling_matrix(mol, drive, medium)
        v = expm(G * medium.zeta) @ entry
        heights.append(1.0 - abs(v[0]) ** 2)
    return heights[0], heights[1]


def peak_heights_linear(mol: MoleculeParams, medium: MediumConfig):
    """Thin-medium limit: each height is linear in depth and in the matching
    enantiomer fraction."""
    scale = 2.0 * mol.Gamma21 * medium.zeta / (mol.gamma12 + mol.gamma13)
    return scale * medium.p_plus, scale * medium.p_minus


def probe_coupling_matrix(mol: MoleculeParams, drive: DriveConfig,
                          medium: MediumConfig, shift21=0.0, shift31=0.0):
    """Coupling matrix G of the linearized two-probe transport in depth:
    d/dzeta (omega21, omega31) = G @ (omega21, omega31).

    Valid to first order in the probes; the mixture enters through the
    enantiomeric difference on the off-diagonal parametric entries, and the
    3-1 row carries the dipole ratio.  Detuning shifts broadcast, returning
    a stacked (..., 2, 2) array for array-valued shifts.
    """
    l21, l31 = _lambdas(mol, drive.delta, np.asarray(shift21), np.asarray(shift31))
    oc = drive.omega32_abs
    Z = 0.25 * oc * oc + l21 * l31
    if np.min(np.abs(Z)) < 1e-14:
        raise DegenerateDenominator("probe coupling denominator numerically zero")
    o32 = oc * np.exp(-1j * drive.theta)
    dp = medium.dp
    A = medium.dipole_ratio
    pref = 1j * mol.Gamma21
    g00 = pref * (0.5j * l31) / Z
    g01 = pref * (-0.25 * np.conj(o32) * dp) / Z
    g10 = pref * A * (-0.25 * o32 * dp) / Z
    g11 = pref * A * (0.5j * l21) / Z
    g00, g01, g10, g11 = np.broadcast_arrays(g00, g01, g10, g11)
    return np.stack([np.stack([g00, g01], axis=-1),
                     np.stack([g10, g11], axis=-1)], axis=-2)
