"""Sharpness and Holevo variance of cyclic phase estimates.

Infinite variance (zero sharpness) is reported as ``math.inf`` rather than
raised: several legitimate schemes carry no phase information at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ZERO_SHARPNESS = 1e-15


def holevo_from_sharpness(mu: float) -> float:
    """``mu**-2 - 1``, or ``inf`` when ``mu`` is below 1e-15."""
    mu = float(abs(mu))
    if mu < ZERO_SHARPNESS:
        return math.inf
    return mu**-2 - 1.0


def mean_kernel(weights, estimates, true_phase: float) -> complex:
    """Weighted mean of ``exp(i (true_phase - estimate))``.

    ``weights`` are outcome probabilities (or counts, normalized here).
    """
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if total <= 0:
        raise ValueError("weights must have a positive sum")
    est = np.asarray(estimates, dtype=float)
    return complex(np.sum(w * np.exp(1j * (true_phase - est))) / total)


def uniform_grid(size: int, offset: float = 0.0) -> np.ndarray:
    """``size`` equispaced phases on ``[offset, offset + 2 pi)``."""
    if size < 1:
        raise ValueError("grid size must be positive")
    return offset + 2.0 * np.pi * np.arange(size) / size


def check_grid(size: int, degree: int) -> None:
    """Reject grids too coarse to average a degree-``degree`` trig polynomial exactly."""
    need = 2 * degree + 2
    if size < need:
        raise ValueError(f"phase grid of {size} points is too coarse; need at least {need} (2N+2 with N={degree})")


def unconditional_from_kernels(kernels) -> float:
    """Holevo variance of the phase-averaged complex kernel."""
    return holevo_from_sharpness(abs(np.mean(np.asarray(kernels, dtype=complex))))


def unconditional_from_conditional(conditional_variance, kernel_phase) -> float:
    """Recombine per-phase variances into the unconditional one.

    Each term ``(V + 1)**-1/2`` is the per-phase sharpness; it is averaged
    together with the argument of its complex kernel.  Dropping the argument
    overestimates the sharpness whenever the estimate is biased at some phases.
    """
    v = np.asarray(conditional_variance, dtype=float)
    mu = np.where(np.isinf(v), 0.0, 1.0 / np.sqrt(v + 1.0))
    return holevo_from_sharpness(abs(np.mean(mu * np.exp(1j * np.asarray(kernel_phase, dtype=float)))))


@dataclass(frozen=True)
class PhaseSweepResult:
    """Per-phase conditional statistics over a uniform phase grid.

    ``kernels`` holds the complex mean of ``exp(i(phi - phi_est))`` at each
    grid phase; ``sharpness`` is its modulus.  ``probabilities`` has one row
    per phase (one column per outcome) when outcome columns apply.
    """

    phases: np.ndarray
    kernels: np.ndarray
    conditional_variance: np.ndarray
    unconditional_variance: float
    mode: str
    probabilities: np.ndarray | None = None
    outcome_labels: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict)

    @property
    def sharpness(self) -> np.ndarray:
        return np.abs(self.kernels)

    def recombined_variance(self) -> float:
        return unconditional_from_conditional(self.conditional_variance, np.angle(self.kernels))


def sweep_from_kernels(phases, kernels, mode: str, probabilities=None, outcome_labels=(), metadata=None):
    kernels = np.asarray(kernels, dtype=complex)
    cond = np.array([holevo_from_sharpness(abs(k)) for k in kernels])
    return PhaseSweepResult(
        phases=np.asarray(phases, dtype=float),
        kernels=kernels,
        conditional_variance=cond,
        unconditional_variance=unconditional_from_kernels(kernels),
        mode=mode,
        probabilities=None if probabilities is None else np.asarray(probabilities, dtype=float),
        outcome_labels=tuple(outcome_labels),
        metadata=dict(metadata or {}),
    )
