"""Few-qubit states, the interferometer gates and X-basis measurement.

Basis ordering is big-endian: qubit 0 is the leftmost tensor factor and is the
first photon to be measured (the multi-pass photon).  Everything here works on
dense ``2**n`` vectors and matrices; ``n`` is at most 4.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

MAX_QUBITS = 4
ALGEBRA_TOL = 1e-12
EIGEN_TOL = 1e-10

# X-basis eigenstates; index 0 is "d", index 1 is "a".
X_BASIS = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
X_LABELS = ("d", "a")

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2.0)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2.0)


class StateValidationError(ValueError):
    """Raised when an array fails a state invariant.

    ``invariant`` names the check that failed (``"shape"``, ``"norm"``,
    ``"hermitian"``, ``"trace"``, ``"positivity"``, ``"finite"``).
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def _num_qubits_for(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if n < 1 or 2**n != dim or n > MAX_QUBITS:
        raise StateValidationError("shape", f"dimension {dim} is not 2**n with 1 <= n <= {MAX_QUBITS}")
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise StateValidationError("shape", "amplitudes must be a vector")
        _num_qubits_for(amps.size)
        if not np.all(np.isfinite(amps)):
            raise StateValidationError("finite", "amplitudes contain NaN or inf")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > ALGEBRA_TOL:
            raise StateValidationError("norm", f"squared norm is {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.amplitudes.size)

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    data: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.data, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise StateValidationError("shape", f"expected a square matrix, got shape {rho.shape}")
        _num_qubits_for(rho.shape[0])
        if not np.all(np.isfinite(rho)):
            raise StateValidationError("finite", "entries contain NaN or inf")
        herm_err = float(np.max(np.abs(rho - rho.conj().T)))
        if herm_err > ALGEBRA_TOL:
            raise StateValidationError("hermitian", f"max |rho - rho^dagger| = {herm_err:.3e}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > ALGEBRA_TOL:
            raise StateValidationError("trace", f"trace is {tr!r}, expected 1")
        min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
        if min_eig < -EIGEN_TOL:
            raise StateValidationError("positivity", f"smallest eigenvalue {min_eig:.3e} < -{EIGEN_TOL}")
        object.__setattr__(self, "data", _frozen(rho))

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.data.shape[0])

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> DensityMatrix:
        dim = 2**num_qubits
        return cls(np.eye(dim) / dim)


def as_density_matrix(state: PureState | DensityMatrix) -> DensityMatrix:
    """Promote a pure state to its projector; density matrices pass through."""
    if isinstance(state, PureState):
        return state.density_matrix()
    if isinstance(state, DensityMatrix):
        return state
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def check_unitary(matrix: np.ndarray, tol: float = ALGEBRA_TOL) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
    if err > tol:
        raise ValueError(f"matrix is not unitary: max |U U^dagger - I| = {err:.3e}")
    return m


def phase_gate(p: int, phi: float) -> np.ndarray:
    """``p`` coherent passes of the unknown phase: ``diag(1, exp(i p phi))``."""
    if int(p) != p or p < 1:
        raise ValueError(f"number of passes must be an integer >= 1, got {p!r}")
    if not np.isfinite(phi):
        raise ValueError("phase must be finite")
    return np.diag([1.0, np.exp(1j * p * phi)]).astype(complex)


def reference_phase(theta: float) -> np.ndarray:
    """Controllable reference-arm phase ``diag(exp(i theta), 1)``."""
    if not np.isfinite(theta):
        raise ValueError("phase must be finite")
    return np.diag([np.exp(1j * theta), 1.0]).astype(complex)


def embed(gate: np.ndarray, index: int, num_qubits: int) -> np.ndarray:
    """Full-register matrix ``I x ... x gate x ... x I`` with ``gate`` on ``index``."""
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ValueError(f"single-qubit gate must be 2x2, got {gate.shape}")
    if not 0 <= index < num_qubits:
        raise IndexError(f"qubit index {index} out of range for {num_qubits} qubits")
    return np.kron(np.kron(np.eye(2**index), gate), np.eye(2 ** (num_qubits - index - 1)))


def _apply_1q(gate: np.ndarray, index: int, rho: np.ndarray, n: int) -> np.ndarray:
    # Contract the gate into the row and column indices of qubit ``index``.
    t = rho.reshape((2,) * (2 * n))
    t = np.moveaxis(np.tensordot(gate, t, axes=([1], [index])), 0, index)
    t = np.moveaxis(np.tensordot(t, gate.conj(), axes=([n + index], [1])), -1, n + index)
    return t.reshape(2**n, 2**n)


def apply_on_qubit(gate: np.ndarray, index: int, state: DensityMatrix) -> DensityMatrix:
    """Conjugate ``state`` by ``gate`` acting on one qubit."""
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ValueError(f"single-qubit gate must be 2x2, got {gate.shape}")
    n = state.num_qubits
    if not 0 <= index < n:
        raise IndexError(f"qubit index {index} out of range for {n} qubits")
    return DensityMatrix(_apply_1q(gate, index, state.data, n))


def apply_cnot(state: PureState, control: int, target: int) -> PureState:
    """Flip ``target`` on the basis states where ``control`` is 1."""
    n = state.num_qubits
    for q in (control, target):
        if not 0 <= q < n:
            raise IndexError(f"qubit index {q} out of range for {n} qubits")
    if control == target:
        raise ValueError("control and target must differ")
    t = np.array(state.amplitudes).reshape((2,) * n)
    sel = [slice(None)] * n
    sel[control] = 1
    sub = t[tuple(sel)]
    tgt_axis = target if target < control else target - 1
    t[tuple(sel)] = np.flip(sub, axis=tgt_axis).copy()
    return PureState(t.reshape(-1))


def project_x(state: DensityMatrix, index: int, result: int) -> tuple[float, np.ndarray]:
    """Branch probability and post-measurement matrix that still carries the qubit.

    ``result`` is 0 for ``d`` and 1 for ``a``.  The returned matrix is
    normalized when the probability is nonzero.
    """
    n = state.num_qubits
    vec = X_BASIS[:, result]
    proj = embed(np.outer(vec, vec.conj()), index, n)
    post = proj @ state.data @ proj
    prob = float(np.trace(post).real)
    if prob > 0:
        post = post / prob
    return prob, post


def _branch(rho: np.ndarray, n: int, index: int, result: int) -> tuple[float, np.ndarray | None]:
    """Probability of ``result`` on ``index`` and the reduced state of the rest."""
    bra = X_BASIS[:, result].conj()
    t = rho.reshape((2,) * (2 * n))
    t = np.tensordot(bra, t, axes=([0], [index]))
    t = np.tensordot(t, bra.conj(), axes=([n - 1 + index], [0]))
    dim = 2 ** (n - 1)
    reduced = t.reshape(dim, dim)
    prob = float(np.trace(reduced).real)
    prob = min(max(prob, 0.0), 1.0)
    if n == 1:
        return prob, None
    if prob <= 0.0:
        return 0.0, None
    return prob, reduced / prob


@dataclass(frozen=True)
class MeasurementOutcome:
    result: Literal["d", "a"]
    probability: float
    collapsed: DensityMatrix | None
    p_d: float
    p_a: float

    @property
    def bit(self) -> int:
        return X_LABELS.index(self.result)


def measure_x(state: DensityMatrix, index: int, draw: float) -> MeasurementOutcome:
    """Projective X measurement of one qubit, decided by a uniform ``draw``.

    The outcome is ``d`` when ``draw < P_d``.  ``collapsed`` is the normalized
    state of the remaining qubits, or ``None`` when no qubit remains.
    """
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw!r}")
    n = state.num_qubits
    if not 0 <= index < n:
        raise IndexError(f"qubit index {index} out of range for {n} qubits")
    tr = complex(np.trace(state.data))
    if abs(tr - 1.0) > ALGEBRA_TOL:
        raise StateValidationError("trace", f"trace is {tr!r}, expected 1")
    p_d, rest_d = _branch(state.data, n, index, 0)
    p_a = 1.0 - p_d
    if draw < p_d:
        result, prob, rest = "d", p_d, rest_d
    else:
        _, rest = _branch(state.data, n, index, 1)
        result, prob = "a", p_a
    collapsed = DensityMatrix(_hermitize(rest)) if rest is not None else None
    return MeasurementOutcome(result, prob, collapsed, p_d, p_a)


def _hermitize(m: np.ndarray) -> np.ndarray:
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real


def fidelity(rho: DensityMatrix, psi: PureState) -> float:
    """Overlap ``<psi|rho|psi>`` of a density matrix with a pure target."""
    if rho.num_qubits != psi.num_qubits:
        raise ValueError(f"dimension mismatch: {rho.num_qubits} vs {psi.num_qubits} qubits")
    v = psi.amplitudes
    return float(np.vdot(v, rho.data @ v).real)


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.trace(rho.data @ rho.data)))


def load_density_matrix(path: str | Path) -> DensityMatrix:
    """Read the ``{"num_qubits", "real", "imag"}`` JSON format.

    Raises :class:`StateValidationError` naming the failed invariant.
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StateValidationError("schema", f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise StateValidationError("schema", "density-matrix file must hold a JSON object")
    return density_matrix_from_dict(payload)


def density_matrix_from_dict(payload: dict) -> DensityMatrix:
    try:
        n = int(payload["num_qubits"])
        re = np.asarray(payload["real"], dtype=float)
        im = np.asarray(payload["imag"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateValidationError("schema", f"malformed density-matrix object: {exc}") from exc
    if not 1 <= n <= MAX_QUBITS:
        raise StateValidationError("shape", f"num_qubits={n} outside 1..{MAX_QUBITS}")
    dim = 2**n
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise StateValidationError(
            "shape", f"num_qubits={n} needs {dim}x{dim} real/imag arrays, got {re.shape} and {im.shape}"
        )
    return DensityMatrix(re + 1j * im)


def density_matrix_to_dict(rho: DensityMatrix) -> dict:
    return {
        "num_qubits": rho.num_qubits,
        "real": rho.data.real.tolist(),
        "imag": rho.data.imag.tolist(),
    }


def save_density_matrix(rho: DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(density_matrix_to_dict(rho), indent=2) + "\n", encoding="utf-8")
