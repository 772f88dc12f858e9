"""Probe-field transport through the mixed-chirality medium.

Propagation is parameterized by the dimensionless optical depth; the
common coupling prefactor is normalized to one per unit depth on the 2-1
probe, and the 3-1 probe carries the dipole ratio.  The strong control
field is treated as undepleted.  Two engines are provided: a closed-form
matrix-exponential solution of the linearized (weak-probe) transport, and
a full solver that recomputes both enantiomers' steady states from the
local fields at every integration stage, so it remains valid when the
probes are not weak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import bloch
from .analytic import probe_coupling_matrix
from .errors import StepTooLarge, ZeroEntryField
from .model import DriveConfig, MediumConfig, MoleculeParams

__all__ = [
    "FieldState",
    "propagate_linear",
    "propagate_full",
    "transmission",
    "absorption",
]


@dataclass(frozen=True)
class FieldState:
    """Complex probe amplitudes at one depth; the control amplitude is
    carried along unchanged from entry."""

    omega21: complex
    omega31: complex
    omega32: complex
    zeta: float


def _entry_fields(drive: DriveConfig):
    # Probe phases are absorbed into the loop phase, so probes enter real
    # and non-negative while the control carries exp(-i theta).
    o21 = complex(drive.omega21_abs)
    o31 = complex(drive.omega31_abs)
    o32 = drive.omega32_abs * np.exp(-1j * drive.theta)
    return o21, o31, o32


def _check_grid(zeta_grid):
    grid = [float(z) for z in zeta_grid]
    if not grid:
        raise ValueError("zeta_grid must be non-empty")
    if any(z < 0 for z in grid):
        raise ValueError("zeta_grid entries must be >= 0")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("zeta_grid must be sorted ascending")
    return grid


def propagate_linear(medium: MediumConfig, mol: MoleculeParams,
                     drive_at_entry: DriveConfig, zeta_grid) -> list[FieldState]:
    """Closed-form transport of the linearized two-probe system.

    The coupling matrix is depth-independent, so the fields at any depth
    follow from one matrix exponential per requested point.
    """
    grid = _check_grid(zeta_grid)
    o21, o31, o32 = _entry_fields(drive_at_entry)
    G = probe_coupling_matrix(mol, drive_at_entry, medium)
    v0 = np.array([o21, o31])
    out = []
    for z in grid:
        v = v0 if z == 0.0 else expm(G * z) @ v0
        out.append(FieldState(omega21=complex(v[0]), omega31=complex(v[1]),
                              omega32=complex(o32), zeta=z))
    return out


def _mixture_derivative(o21, o31, o32, mol, medium, delta):
    a21, a31 = abs(o21), abs(o31)
    oc = abs(o32)
    th21 = -np.angle(o21) if a21 > 0 else 0.0
    th31 = -np.angle(o31) if a31 > 0 else 0.0
    th32 = -np.angle(o32)
    theta_local = th32 + th21 - th31
    s21_l, s31_l = bloch._steady_coherences(mol, a21, a31, oc, delta, theta_local)
    s21_r, s31_r = bloch._steady_coherences(mol, a21, a31, oc, delta,
                                            theta_local + math.pi)
    S21 = medium.p_plus * s21_l + medium.p_minus * s21_r
    S31 = medium.p_plus * s31_l + medium.p_minus * s31_r
    d21 = 1j * mol.Gamma21 * S21 * np.exp(-1j * th21)
    d31 = 1j * mol.Gamma21 * medium.dipole_ratio * S31 * np.exp(-1j * th31)
    return d21, d31


def propagate_full(medium: MediumConfig, mol: MoleculeParams,
                   drive_at_entry: DriveConfig, zeta_grid, step: float,
                   check_convergence: bool = False) -> list[FieldState]:
    """Nonperturbative transport: 4th-order fixed-step integration in depth.

    Every integration stage solves the steady state of both enantiomers at
    the current local amplitudes and loop phase (recomputed from the complex
    field phases) and advances the fields with the fraction-weighted mixture
    polarization.  With ``check_convergence`` the run is repeated at half
    step and must agree to 1e-8 relative.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    grid = _check_grid(zeta_grid)
    entry_scale = max(drive_at_entry.omega21_abs, drive_at_entry.omega31_abs, 1e-300)

    def integrate(h_max):
        o21, o31, o32 = _entry_fields(drive_at_entry)
        delta = drive_at_entry.delta
        z = 0.0
        out = []
        for z_target in grid:
            span = z_target - z
            if span > 0:
                n = max(1, math.ceil(span / h_max))
                h = span / n
                for _ in range(n):
                    k1 = _mixture_derivative(o21, o31, o32, mol, medium, delta)
                    k2 = _mixture_derivative(o21 + 0.5 * h * k1[0],
                                             o31 + 0.5 * h * k1[1],
                                             o32, mol, medium, delta)
                    k3 = _mixture_derivative(o21 + 0.5 * h * k2[0],
                                             o31 + 0.5 * h * k2[1],
                                             o32, mol, medium, delta)
                    k4 = _mixture_derivative(o21 + h * k3[0], o31 + h * k3[1],
                                             o32, mol, medium, delta)
                    n21 = o21 + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
                    n31 = o31 + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
                    for old, new in ((o21, n21), (o31, n31)):
                        m_old = abs(old)
                        if m_old > 1e-9 * entry_scale and \
                                abs(abs(new) - m_old) > 0.2 * m_old:
                            raise StepTooLarge(
                                "field magnitude changed by more than 20% in "
                                "one step; reduce step")
                    o21, o31 = n21, n31
                z = z_target
            out.append(FieldState(omega21=complex(o21), omega31=complex(o31),
                                  omega32=complex(o32), zeta=z_target))
        return out

    states = integrate(step)
    if check_convergence:
        refined = integrate(step / 2.0)
        scale = max(abs(states[-1].omega21), abs(states[-1].omega31), 1e-300)
        err = max(abs(states[-1].omega21 - refined[-1].omega21),
                  abs(states[-1].omega31 - refined[-1].omega31)) / scale
        if err > 1e-8:
            raise StepTooLarge(
                f"halving the step moved the result by {err:.2e} relative; "
                "reduce step")
    return states


def transmission(entry: FieldState, exit: FieldState) -> float:
    """Probe intensity ratio |omega21(exit)|^2 / |omega21(entry)|^2."""
    denom = abs(entry.omega21) ** 2
    if denom == 0.0:
        raise ZeroEntryField("transmission undefined for zero entry probe")
    return abs(exit.omega21) ** 2 / denom


def absorption(entry: FieldState, exit: FieldState) -> float:
    return 1.0 - transmission(entry, exit)
