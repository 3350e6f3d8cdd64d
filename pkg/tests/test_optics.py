import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import density_matrices, random_density
from hlphase import optics
from hlphase.hpea import optimal_state, outcome_distribution_exact
from hlphase.quantum import X_BASIS, apply_on_qubit, phase_gate, reference_phase

angles = st.floats(-10, 10, allow_nan=False)


def circ_dist(a: float, b: float) -> float:
    return abs(float(np.angle(np.exp(1j * (a - b)))))


@given(angles)
def test_waveplates_unitary(g):
    for m in (optics.qwp_matrix(g), optics.hwp_matrix(g), optics.encoding_stage(g)):
        assert np.max(np.abs(m @ m.conj().T - np.eye(2))) < 1e-12


def test_qwp_examples():
    assert optics.equal_up_to_phase(optics.qwp_matrix(0.0), np.diag([1, 1j]))
    q = optics.qwp_matrix(np.pi / 4)
    assert np.allclose(q @ optics.H, np.exp(1j * np.pi / 4) * optics.R, atol=1e-15)
    assert np.allclose(q @ optics.V, np.exp(-1j * np.pi / 4) * optics.L, atol=1e-15)


@given(angles)
def test_four_quarter_waves_and_two_half_waves(g):
    assert optics.equal_up_to_phase(np.linalg.matrix_power(optics.qwp_matrix(g), 4), np.eye(2))
    assert optics.equal_up_to_phase(np.linalg.matrix_power(optics.hwp_matrix(g), 2), np.eye(2))


def test_hwp_examples():
    assert optics.equal_up_to_phase(optics.hwp_matrix(0.0), np.diag([1, -1]))
    assert optics.equal_up_to_phase(optics.hwp_matrix(np.pi / 4), np.array([[0, 1], [1, 0]]))
    out = optics.hwp_matrix(np.pi / 8) @ optics.D
    assert abs(abs(np.vdot(optics.H, out)) - 1) < 1e-12


def test_waveplate_setting_normalizes_angle():
    s = optics.WaveplateSetting("HWP", -0.1)
    assert 0 <= s.angle < np.pi
    assert np.allclose(s.jones(), optics.hwp_matrix(-0.1), atol=1e-15)
    assert optics.WaveplateSetting("QWP", np.pi).angle == 0.0
    with pytest.raises(ValueError):
        optics.WaveplateSetting("XWP", 0.0)


def test_unknown_phase_examples():
    assert circ_dist(optics.verify_unknown_phase_encoding(0.0), 0.0) < 1e-10
    assert circ_dist(optics.verify_unknown_phase_encoding(np.pi / 2), np.pi / 2) < 1e-10
    assert circ_dist(optics.combined_encoding(0.7, 0.0, passes=2), 1.4) < 1e-10


def test_unknown_phase_symbolic_expansion():
    # The stage sends h -> exp(i phi) l and v -> r up to one common factor.
    phi = np.pi / 2
    J = optics.encoding_stage(optics.unknown_phase_hwp_angle(phi))
    alpha, beta = optics.arm_factors(optics.unknown_phase_hwp_angle(phi))
    assert np.allclose(J @ optics.H, alpha * optics.L) and np.allclose(J @ optics.V, beta * optics.R)
    assert abs(alpha) == pytest.approx(1) and abs(beta) == pytest.approx(1)
    assert circ_dist(np.angle(alpha / beta), phi) < 1e-12


def test_feedforward_examples():
    assert circ_dist(optics.verify_feedforward_encoding(0.0), 0.0) < 1e-10
    assert circ_dist(optics.verify_feedforward_encoding(np.pi / 2), np.pi / 2) < 1e-10


@given(angles, angles)
def test_encodings_and_net_phase(phi, theta):
    assert circ_dist(optics.verify_unknown_phase_encoding(phi), phi) < 1e-10
    assert circ_dist(optics.verify_feedforward_encoding(theta), theta) < 1e-10
    assert circ_dist(optics.combined_encoding(phi, theta), phi - theta) < 1e-10
    assert circ_dist(optics.combined_encoding(phi, theta, passes=2), 2 * phi - theta) < 1e-10


@given(angles, angles)
def test_encoding_linearity(a, b):
    total = optics.verify_unknown_phase_encoding(a + b)
    parts = optics.verify_unknown_phase_encoding(a) + optics.verify_unknown_phase_encoding(b)
    assert circ_dist(total, parts) < 1e-10


def test_optical_gate_matches_logical_gates():
    for phi in np.linspace(0, 2 * np.pi, 13):
        for theta in np.linspace(0, 2 * np.pi, 5):
            for p in (1, 2):
                logical = reference_phase(theta) @ phase_gate(p, phi)
                assert optics.equal_up_to_phase(optics.optical_gate(phi, theta, p), logical, atol=1e-12)


def _x_probabilities(rho: np.ndarray) -> np.ndarray:
    basis = np.kron(X_BASIS, X_BASIS)
    return np.real(np.einsum("ij,jk,ki->i", basis.conj().T, rho, basis))


def test_circuit_equivalence_on_phase_and_reference_grid():
    """Both photons through their stages, then X-basis readout, on a 64 x 8 grid."""
    rng = np.random.default_rng(8)
    states = [optimal_state().density_matrix()] + [random_density(rng, 2) for _ in range(3)]
    worst = 0.0
    for rho in states:
        for phi in 2 * np.pi * np.arange(64) / 64:
            for theta in 2 * np.pi * np.arange(8) / 8:
                logical = apply_on_qubit(phase_gate(2, phi), 0, rho)
                logical = apply_on_qubit(reference_phase(theta) @ phase_gate(1, phi), 1, logical)
                optical = apply_on_qubit(optics.optical_gate(phi, passes=2), 0, rho)
                optical = apply_on_qubit(optics.optical_gate(phi, theta), 1, optical)
                worst = max(worst, np.max(np.abs(_x_probabilities(logical.data) - _x_probabilities(optical.data))))
    assert worst < 1e-10


@given(density_matrices(2), st.floats(0, 2 * np.pi), st.booleans())
def test_protocol_equivalence(rho, phi, ff):
    logical = outcome_distribution_exact(rho, phi, ff).probabilities
    optical = optics.optical_outcome_probabilities(rho, phi, ff)
    assert np.max(np.abs(logical - optical)) < 1e-10


def test_calibration_table():
    rows = optics.calibration_table(2 * np.pi * np.arange(8) / 8)
    assert len(rows) == 8
    for row in rows:
        assert 0 <= row["unknown_hwp_angle"] < np.pi and 0 <= row["feedforward_hwp_angle"] < np.pi
        assert circ_dist(row["unknown_encoded"], row["phase"]) < 1e-10
        assert circ_dist(row["feedforward_encoded"], row["phase"]) < 1e-10
    # no feedforward phase sits at the pi/8 offset; a quarter turn needs pi/4 on top of it
    assert rows[0]["feedforward_hwp_angle"] == pytest.approx(np.pi / 8)
    assert rows[2]["feedforward_hwp_angle"] == pytest.approx(np.pi / 4)
