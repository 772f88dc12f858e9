"""Generator and steady-state solver checks.

The oracle here is built independently of the package: the dissipative
right-hand side is assembled from plain matrix products (commutator plus
jump-operator sandwiches), then compared component-wise against the packed
real 8-dimensional affine system.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chiral_spectra import (DensityMatrix, DriveConfig, Handedness,
                            MoleculeParams, StepTooLarge, build_liouvillian,
                            evolve, steady_state)
from chiral_spectra.bloch import _generator, _matrix_from_vec, _vec_from_matrix

MOL = MoleculeParams.default_closed()


def reference_rhs(rho, mol, op, oq, oc, delta, theta):
    """Independent dissipative right-hand side from matrix products."""
    H = np.zeros((3, 3), complex)
    H[1, 1] = -delta
    H[2, 2] = -delta
    H[1, 0] = H[0, 1] = -op / 2
    H[2, 0] = H[0, 2] = -oq / 2
    H[2, 1] = -(oc / 2) * np.exp(-1j * theta)
    H[1, 2] = np.conj(H[2, 1])
    out = -1j * (H @ rho - rho @ H)
    jumps = [(mol.Gamma21, np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], complex)),
             (mol.Gamma31, np.array([[0, 0, 1], [0, 0, 0], [0, 0, 0]], complex)),
             (mol.Gamma32, np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]], complex))]
    for g, L in jumps:
        out += g * (L @ rho @ L.conj().T
                    - 0.5 * (L.conj().T @ L @ rho + rho @ L.conj().T @ L))
    return out


def pack(m):
    return np.array([m[0, 0].real, m[1, 1].real,
                     m[1, 0].real, m[1, 0].imag,
                     m[2, 0].real, m[2, 0].imag,
                     m[2, 1].real, m[2, 1].imag])


@settings(max_examples=40, deadline=None)
@given(theta=st.floats(0.0, 6.28), delta=st.floats(-10.0, 10.0),
       seed=st.integers(0, 2**31 - 1))
def test_generator_matches_reference_rhs(theta, delta, seed):
    op, oq, oc = 0.13, 0.21, 3.0
    M, b = _generator(MOL, op, oq, oc, delta, theta)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=8)
    sig = _matrix_from_vec(x)
    want = pack(reference_rhs(sig, MOL, op, oq, oc, delta, theta))
    np.testing.assert_allclose(M @ x + b, want, rtol=0.0, atol=1e-12)


def test_vec_matrix_round_trip():
    rng = np.random.default_rng(3)
    x = rng.normal(size=8)
    assert np.allclose(_vec_from_matrix(_matrix_from_vec(x)), x)


def test_build_liouvillian_handedness_shifts_phase():
    drive = DriveConfig(0.1, 0.1, 10.0, delta=-2.0, theta=0.4)
    left = build_liouvillian(MOL, drive, Handedness.LEFT)
    ref_l = _generator(MOL, 0.1, 0.1, 10.0, -2.0, 0.4)
    right = build_liouvillian(MOL, drive, Handedness.RIGHT)
    ref_r = _generator(MOL, 0.1, 0.1, 10.0, -2.0, 0.4 + np.pi)
    assert np.allclose(left.matrix, ref_l[0])
    assert np.allclose(right.matrix, ref_r[0], atol=1e-12)
    assert np.allclose(right.source, ref_r[1], atol=1e-12)


def test_liouvillian_apply_vanishes_at_steady_state():
    drive = DriveConfig(0.1, 0.1, 10.0, delta=-5.0)
    for hand in Handedness:
        gen = build_liouvillian(MOL, drive, hand)
        dm = steady_state(MOL, drive, hand)
        resid = gen.apply(pack(dm.matrix))
        assert np.max(np.abs(resid)) <= 1e-10


@pytest.mark.parametrize("delta", [-5.0, 0.0, 2.7])
@pytest.mark.parametrize("theta", [0.0, np.pi, 1.1])
def test_steady_state_is_physical(delta, theta):
    drive = DriveConfig(0.1, 0.1, 10.0, delta=delta, theta=theta)
    for hand in Handedness:
        dm = steady_state(MOL, drive, hand)
        m = dm.matrix
        assert np.max(np.abs(m - m.conj().T)) <= 1e-12
        assert abs(m.trace().real - 1.0) <= 1e-10
        assert np.min(np.linalg.eigvalsh(m)) >= -1e-9


def test_steady_state_no_drive_is_ground_state():
    drive = DriveConfig(0.0, 0.0, 0.0, delta=0.0)
    dm = steady_state(MOL, drive, Handedness.LEFT)
    assert dm.populations == pytest.approx([1.0, 0.0, 0.0], abs=1e-12)


def test_evolve_converges_to_steady_state():
    drive = DriveConfig(0.1, 0.1, 10.0, delta=-5.0)
    ground = DensityMatrix(np.diag([1.0, 0.0, 0.0]).astype(complex))
    target = steady_state(MOL, drive, Handedness.LEFT)
    out = evolve(ground, MOL, drive, Handedness.LEFT, t_final=40.0, dt=0.002)
    assert np.max(np.abs(out.matrix - target.matrix)) <= 1e-8


def test_evolve_converges_from_random_initial_states():
    drive = DriveConfig(0.1, 0.1, 10.0, delta=-5.0)
    target = steady_state(MOL, drive, Handedness.LEFT)
    rng = np.random.default_rng(7)
    for _ in range(3):
        raw = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = raw @ raw.conj().T
        start = DensityMatrix(rho / np.trace(rho).real)
        out = evolve(start, MOL, drive, Handedness.LEFT, t_final=40.0,
                     dt=0.005)
        assert np.max(np.abs(out.matrix - target.matrix)) <= 1e-6


def test_opposite_handedness_matches_shifted_phase():
    for theta in (0.0, 1.1, 4.0):
        left = steady_state(MOL, DriveConfig(0.1, 0.1, 10.0, delta=-3.0,
                                             theta=theta), Handedness.LEFT)
        right = steady_state(MOL, DriveConfig(0.1, 0.1, 10.0, delta=-3.0,
                                              theta=theta - np.pi),
                             Handedness.RIGHT)
        assert np.max(np.abs(left.matrix - right.matrix)) <= 1e-14


def test_evolve_zero_time_returns_initial():
    start = DensityMatrix(np.diag([0.5, 0.5, 0.0]).astype(complex))
    drive = DriveConfig(0.1, 0.1, 10.0, delta=0.0)
    out = evolve(start, MOL, drive, Handedness.LEFT, t_final=0.0, dt=0.01)
    assert np.array_equal(out.matrix, start.matrix)

def test_evolve_rejects_bad_steps():
    start = DensityMatrix(np.diag([1.0, 0.0, 0.0]).astype(complex))
    drive = DriveConfig(0.1, 0.1, 10.0, delta=0.0)
    with pytest.raises(ValueError):
        evolve(start, MOL, drive, Handedness.LEFT, t_final=1.0, dt=0.0)
    with pytest.raises(ValueError):
        evolve(start, MOL, drive, Handedness.LEFT, t_final=-1.0, dt=0.1)


def test_evolve_oversized_step_aborts():
    start = DensityMatrix(np.diag([1.0, 0.0, 0.0]).astype(complex))
    drive = DriveConfig(0.1, 0.1, 50.0, delta=0.0)
    with pytest.raises(StepTooLarge):
        evolve(start, MOL, drive, Handedness.LEFT, t_final=10.0, dt=0.5)
