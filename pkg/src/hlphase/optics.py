"""Jones-calculus model of the waveplate phase encoding.

Conventions (all in one place):

* Jones vectors are ``(h, v)`` amplitudes; logical ``|0> = h``, ``|1> = v``.
* A retarder at orientation ``gamma`` is ``Rot(gamma) diag(1, exp(i delta)) Rot(-gamma)``,
  fast axis along ``gamma``, retardance on the slow axis, no global phase removed.
  With this choice the quarter-wave plate at ``pi/4`` reproduces the linear to
  circular map ``h -> exp(i pi/4) r``, ``v -> exp(-i pi/4) l`` exactly.
* Circular states ``r = (h - i v)/sqrt 2`` and ``l = (h + i v)/sqrt 2``.

An encoding stage is a QWP at ``pi/4`` followed by an HWP.  It sends ``h`` to
a multiple of ``l`` and ``v`` to a multiple of ``r``, so it acts on the two
interferometer arms as a diagonal matrix.  The arm fed by ``h`` carries the
unknown phase and the arm fed by ``v`` carries the feedforward phase.  In the
logical circuit the unknown phase sits on ``|1>`` and the reference phase on
``|0>``, so the logical basis maps onto the arms swapped: ``|1>`` is the
``h``-fed arm.  X-basis probabilities do not depend on that relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantum import _apply_1q, _branch, as_density_matrix, check_unitary

H = np.array([1.0, 0.0], dtype=complex)
V = np.array([0.0, 1.0], dtype=complex)
D = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
A = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)
R = np.array([1.0, -1j], dtype=complex) / np.sqrt(2.0)
L = np.array([1.0, 1j], dtype=complex) / np.sqrt(2.0)

QWP_ENCODING_ANGLE = np.pi / 4


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def retarder(retardance: float, gamma: float) -> np.ndarray:
    return rotation(gamma) @ np.diag([1.0, np.exp(1j * retardance)]) @ rotation(-gamma)


def qwp_matrix(gamma: float) -> np.ndarray:
    """Quarter-wave plate with its fast axis at ``gamma`` from horizontal."""
    return check_unitary(retarder(np.pi / 2, gamma))


def hwp_matrix(gamma: float) -> np.ndarray:
    """Half-wave plate at ``gamma``, i.e. ``Rot(gamma) diag(1, -1) Rot(-gamma)``."""
    return check_unitary(retarder(np.pi, gamma))


@dataclass(frozen=True)
class WaveplateSetting:
    kind: str
    angle: float

    def __post_init__(self):
        if self.kind not in ("QWP", "HWP"):
            raise ValueError(f"waveplate kind must be 'QWP' or 'HWP', got {self.kind!r}")
        if not np.isfinite(self.angle):
            raise ValueError("waveplate angle must be finite")
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    def jones(self) -> np.ndarray:
        return qwp_matrix(self.angle) if self.kind == "QWP" else hwp_matrix(self.angle)


def compose(settings) -> np.ndarray:
    """Jones matrix of waveplates traversed in the given order."""
    out = np.eye(2, dtype=complex)
    for s in settings:
        out = s.jones() @ out
    return out


def strip_global_phase(m: np.ndarray) -> np.ndarray:
    """Rotate the overall phase so the first sizeable entry is real and positive."""
    flat = np.asarray(m, dtype=complex).ravel()
    k = int(np.argmax(np.abs(flat) > 1e-12))
    return np.asarray(m) * np.exp(-1j * np.angle(flat[k]))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(strip_global_phase(a), strip_global_phase(b), atol=atol))


def unknown_phase_hwp_angle(phi: float) -> float:
    return -phi / 4 + np.pi / 8


def feedforward_hwp_angle(theta: float) -> float:
    return theta / 4 + np.pi / 8


def normalize_angle(angle: float) -> float:
    """Waveplate orientation reduced to ``[0, pi)``."""
    a = float(np.mod(angle, np.pi))
    return 0.0 if a == np.pi else a


def encoding_stage(hwp_angle: float) -> np.ndarray:
    """Jones matrix of QWP(pi/4) followed by an HWP at ``hwp_angle``."""
    return compose([WaveplateSetting("QWP", QWP_ENCODING_ANGLE), WaveplateSetting("HWP", hwp_angle)])


def arm_factors(hwp_angle: float) -> tuple[complex, complex]:
    """Complex factors picked up by the ``h``-fed and ``v``-fed arms.

    The stage maps ``h -> alpha l`` and ``v -> beta r``; returns ``(alpha, beta)``.
    """
    J = encoding_stage(hwp_angle)
    out_h, out_v = J @ H, J @ V
    alpha, beta = np.vdot(L, out_h), np.vdot(R, out_v)
    if not (np.allclose(out_h, alpha * L, atol=1e-12) and np.allclose(out_v, beta * R, atol=1e-12)):
        raise ArithmeticError("encoding stage does not map linear onto circular polarization")
    return complex(alpha), complex(beta)


def _wrap(angle: float) -> float:
    a = float(np.mod(angle, 2.0 * np.pi))
    # rounding can leave -1e-16 folded up to just below 2 pi
    return 0.0 if 2.0 * np.pi - a < 1e-12 else a


def verify_unknown_phase_encoding(phi: float) -> float:
    """Relative phase of the ``h``-fed arm over the ``v``-fed arm, in ``[0, 2 pi)``."""
    alpha, beta = arm_factors(unknown_phase_hwp_angle(phi))
    return _wrap(np.angle(alpha / beta))


def verify_feedforward_encoding(theta: float) -> float:
    """Relative phase of the ``v``-fed (``r``) arm over the ``h``-fed arm, in ``[0, 2 pi)``."""
    alpha, beta = arm_factors(feedforward_hwp_angle(theta))
    return _wrap(np.angle(beta / alpha))


def combined_encoding(phi: float, theta: float, passes: int = 1) -> float:
    """Net arm phase after ``passes`` unknown stages and one feedforward stage."""
    alpha_u, beta_u = arm_factors(unknown_phase_hwp_angle(phi))
    alpha_f, beta_f = arm_factors(feedforward_hwp_angle(theta))
    return _wrap(np.angle((alpha_u**passes * alpha_f) / (beta_u**passes * beta_f)))


def optical_gate(phi: float, theta: float | None = None, passes: int = 1) -> np.ndarray:
    """Logical-basis gate realized by the waveplates, up to a global phase.

    ``passes`` unknown-phase stages and, if ``theta`` is given, one
    feedforward stage.  Row/column 0 is the ``v``-fed arm (logical ``|0>``).
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    alpha, beta = arm_factors(unknown_phase_hwp_angle(phi))
    alpha, beta = alpha**passes, beta**passes
    if theta is not None:
        alpha_f, beta_f = arm_factors(feedforward_hwp_angle(theta))
        alpha, beta = alpha * alpha_f, beta * beta_f
    return np.diag([beta, alpha])


def calibration_table(phases) -> list[dict]:
    """Waveplate orientation and the arm phase it encodes, per requested phase."""
    rows = []
    for p in np.asarray(phases, dtype=float):
        rows.append(
            {
                "phase": float(p),
                "unknown_hwp_angle": normalize_angle(unknown_phase_hwp_angle(p)),
                "unknown_encoded": verify_unknown_phase_encoding(p),
                "feedforward_hwp_angle": normalize_angle(feedforward_hwp_angle(p)),
                "feedforward_encoded": verify_feedforward_encoding(p),
            }
        )
    return rows


def optical_outcome_probabilities(state, phi: float, feedforward: bool = True) -> np.ndarray:
    """Outcome probabilities of the protocol with every gate built from waveplates.

    Same sequential X-basis measurement and outcome indexing as the logical
    circuit; photon ``m`` sees ``2**(K - m)`` unknown-phase stages and, after
    earlier clicks, one feedforward stage.
    """
    rho = as_density_matrix(state)
    K = rho.num_qubits - 1
    if K < 1:
        raise ValueError("the protocol needs at least two photons")
    probs = np.zeros(2 ** (K + 1))

    def walk(prefix: tuple[int, ...], reduced: np.ndarray, weight: float):
        m = len(prefix)
        n = K + 1 - m
        theta = float(np.pi * sum(b / 2 ** (m - j) for j, b in enumerate(prefix)))
        use_ff = feedforward and m > 0
        gate = optical_gate(phi, theta if use_ff else None, passes=2 ** (K - m))
        prepared = _apply_1q(gate, 0, reduced, n)
        for b in (0, 1):
            p, rest = _branch(prepared, n, 0, b)
            if n == 1:
                probs[sum(bit << j for j, bit in enumerate(prefix + (b,)))] = weight * p
            elif rest is not None:
                walk(prefix + (b,), rest, weight * p)

    walk((), np.asarray(rho.data), 1.0)
    return probs
