"""Rotating-frame relaxation generator, steady states and time evolution.

The coherent dynamics of the closed-loop three-level system is written on
the 8-dimensional real coordinate vector

    x = (s11, s22, Re s21, Im s21, Re s31, Im s31, Re s32, Im s32),

with s33 eliminated through the unit trace.  That makes the equations of
motion an affine system dx/dt = M x + b whose fixed point is the steady
state; trace and Hermiticity are then conserved identically, not just to
integrator accuracy.  The control transition is driven on resonance, so
only the shared probe detuning appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularGenerator, StepTooLarge
from .model import DensityMatrix, DriveConfig, Handedness, MoleculeParams

__all__ = ["Liouvillian", "build_liouvillian", "steady_state", "evolve"]


@dataclass(frozen=True)
class Liouvillian:
    """Affine generator dx/dt = matrix @ x + source on the 8-dim real coordinates."""

    matrix: np.ndarray
    source: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x + self.source


def _generator(mol: MoleculeParams, op: float, oq: float, oc: float,
               delta: float, theta: float):
    """Assemble (M, b) for probe amplitudes op, oq, control amplitude oc and
    loop phase theta carried entirely by the control drive."""
    G31, G21, G32 = mol.Gamma31, mol.Gamma21, mol.Gamma32
    g12, g13, g23 = mol.gamma12, mol.gamma13, mol.gamma23
    c, s = math.cos(theta), math.sin(theta)
    D = delta
    M = np.zeros((8, 8))
    b = np.zeros(8)

    M[0, 0] = -G31; M[0, 1] = G21 - G31; M[0, 3] = -op; M[0, 5] = -oq
    b[0] = G31
    M[1, 0] = -G32; M[1, 1] = -(G21 + G32); M[1, 3] = op; M[1, 7] = -oc
    b[1] = G32

    M[2, 2] = -g12; M[2, 3] = -D
    M[2, 4] = -(oc / 2) * s; M[2, 5] = -(oc / 2) * c
    M[2, 6] = (oq / 2) * s; M[2, 7] = -(oq / 2) * c
    M[3, 0] = op / 2; M[3, 1] = -op / 2; M[3, 2] = D; M[3, 3] = -g12
    M[3, 4] = (oc / 2) * c; M[3, 5] = -(oc / 2) * s
    M[3, 6] = -(oq / 2) * c; M[3, 7] = -(oq / 2) * s

    M[4, 2] = (oc / 2) * s; M[4, 3] = -(oc / 2) * c
    M[4, 4] = -g13; M[4, 5] = -D
    M[4, 6] = -(op / 2) * s; M[4, 7] = (op / 2) * c
    M[5, 0] = oq; M[5, 1] = oq / 2
    M[5, 2] = (oc / 2) * c; M[5, 3] = (oc / 2) * s
    M[5, 4] = D; M[5, 5] = -g13
    M[5, 6] = -(op / 2) * c; M[5, 7] = -(op / 2) * s
    b[5] = -oq / 2

    M[6, 2] = -(oq / 2) * s; M[6, 3] = (oq / 2) * c
    M[6, 4] = (op / 2) * s; M[6, 5] = (op / 2) * c
    M[6, 6] = -g23
    M[7, 0] = oc / 2; M[7, 1] = oc
    M[7, 2] = (oq / 2) * c; M[7, 3] = (oq / 2) * s
    M[7, 4] = -(op / 2) * c; M[7, 5] = (op / 2) * s
    M[7, 7] = -g23
    b[7] = -oc / 2

    # The fill above uses the rotated pair e^{i theta} sigma32 as its last two
    # components; undo that so the state vector carries the plain coherence.
    if s != 0.0 or c != 1.0:
        R = np.array([[c, -s], [s, c]])
        M[:, 6:8] = M[:, 6:8] @ R
        M[6:8, :] = R.T @ M[6:8, :]
        b[6:8] = R.T @ b[6:8]
    return M, b


def build_liouvillian(mol: MoleculeParams, drive: DriveConfig,
                      hand: Handedness) -> Liouvillian:
    """Generator of the dissipative dynamics for one enantiomer.

    Handedness enters only by shifting the loop phase by pi for the
    right-handed molecule.
    """
    theta = hand.effective_theta(drive.theta)
    M, b = _generator(mol, drive.omega21_abs, drive.omega31_abs,
                      drive.omega32_abs, drive.delta, theta)
    M.flags.writeable = False
    b.flags.writeable = False
    return Liouvillian(matrix=M, source=b)


def _matrix_from_vec(x: np.ndarray) -> np.ndarray:
    m = np.empty((3, 3), dtype=complex)
    m[0, 0] = x[0]
    m[1, 1] = x[1]
    m[2, 2] = 1.0 - x[0] - x[1]
    m[1, 0] = x[2] + 1j * x[3]
    m[2, 0] = x[4] + 1j * x[5]
    m[2, 1] = x[6] + 1j * x[7]
    m[0, 1] = np.conj(m[1, 0])
    m[0, 2] = np.conj(m[2, 0])
    m[1, 2] = np.conj(m[2, 1])
    return m


def _vec_from_matrix(m: np.ndarray) -> np.ndarray:
    return np.array([
        m[0, 0].real, m[1, 1].real,
        m[1, 0].real, m[1, 0].imag,
        m[2, 0].real, m[2, 0].imag,
        m[2, 1].real, m[2, 1].imag,
    ])


def _steady_vector(mol, op, oq, oc, delta, theta) -> np.ndarray:
    M, b = _generator(mol, op, oq, oc, delta, theta)
    try:
        x = np.linalg.solve(M, -b)
    except np.linalg.LinAlgError as exc:
        raise SingularGenerator(str(exc)) from None
    if np.max(np.abs(M @ x + b)) > 1e-10:
        raise SingularGenerator("steady-state residual exceeds 1e-10")
    return x


def _steady_coherences(mol, op, oq, oc, delta, theta):
    """Fast path for propagation: probe coherences (s21, s31) only."""
    x = _steady_vector(mol, op, oq, oc, delta, theta)
    return complex(x[2], x[3]), complex(x[4], x[5])


def steady_state(mol: MoleculeParams, drive: DriveConfig,
                 hand: Handedness) -> DensityMatrix:
    """Unique fixed point of the driven-dissipative dynamics."""
    theta = hand.effective_theta(drive.theta)
    x = _steady_vector(mol, drive.omega21_abs, drive.omega31_abs,
                       drive.omega32_abs, drive.delta, theta)
    return DensityMatrix(_matrix_from_vec(x))


def evolve(sigma0: DensityMatrix, mol: MoleculeParams, drive: DriveConfig,
           hand: Handedness, t_final: float, dt: float) -> DensityMatrix:
    """Fixed-step 4th-order integration of the affine system up to t_final.

    The step should resolve the fastest scale present (guideline
    dt <= 0.01 / max(control amplitude, rates, |detuning|)).  Populations
    leaving [-0.01, 1.01] abort the integration.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    theta = hand.effective_theta(drive.theta)
    M, b = _generator(mol, drive.omega21_abs, drive.omega31_abs,
                      drive.omega32_abs, drive.delta, theta)
    x = _vec_from_matrix(np.asarray(sigma0.matrix))
    if t_final == 0:
        return DensityMatrix(_matrix_from_vec(x))
    n = max(1, math.ceil(t_final / dt))
    h = t_final / n
    for _ in range(n):
        k1 = M @ x + b
        k2 = M @ (x + 0.5 * h * k1) + b
        k3 = M @ (x + 0.5 * h * k2) + b
        k4 = M @ (x + h * k3) + b
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        pops = (x[0], x[1], 1.0 - x[0] - x[1])
        if any(p < -0.01 or p > 1.01 for p in pops):
            raise StepTooLarge("population left [-0.01, 1.01]; reduce dt")
    return DensityMatrix(_matrix_from_vec(x))
