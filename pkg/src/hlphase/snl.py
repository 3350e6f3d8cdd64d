"""Shot-noise baseline: N independent single photons, one pass each.

Photon ``j`` sees the phase difference ``phi - theta_j`` and clicks ``u = +1``
with probability ``(1 + cos(phi - theta_j)) / 2``.  The record of ``N`` clicks
has a likelihood that is a degree-``N`` trigonometric polynomial in ``phi``,
so its first Fourier coefficient is computed exactly by an equispaced sum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .holevo import PhaseSweepResult, check_grid, holevo_from_sharpness, sweep_from_kernels, uniform_grid
from .streams import cell_generator

MAX_PHOTONS = 12
INFO_FREE_TOL = 1e-12


def default_schedule(N: int) -> np.ndarray:
    """Reference phases ``theta_j = j pi / N`` for ``j = 1..N``."""
    return np.arange(1, N + 1) * np.pi / N


def click_probability(u: int, phi: float, theta: float) -> float:
    if u not in (-1, 1):
        raise ValueError(f"outcome must be +1 or -1, got {u!r}")
    return 0.5 * (1.0 + u * np.cos(phi - theta))


def _check_N(N: int) -> None:
    if int(N) != N or not 1 <= N <= MAX_PHOTONS:
        raise ValueError(f"N must be an integer in 1..{MAX_PHOTONS}, got {N!r}")


def outcome_vectors(N: int) -> np.ndarray:
    """All ``2**N`` click records as rows of +-1."""
    return np.array(list(itertools.product((1, -1), repeat=N)), dtype=int)


def record_likelihoods(phases, schedule) -> np.ndarray:
    """``P(u | phi)`` for every record (columns) at every phase (rows)."""
    phases = np.atleast_1d(np.asarray(phases, dtype=float))
    schedule = np.asarray(schedule, dtype=float)
    u = outcome_vectors(schedule.size)
    cos = np.cos(phases[:, None] - schedule[None, :])
    return np.prod(0.5 * (1.0 + u[None, :, :] * cos[:, None, :]), axis=2)


def _first_fourier(schedule, grid_size: int | None = None) -> np.ndarray:
    """``(1/2pi) int exp(i phi) P(u|phi) dphi`` for every record ``u``."""
    N = len(schedule)
    size = grid_size or 2 * N + 2
    check_grid(size, N)
    phases = uniform_grid(size)
    like = record_likelihoods(phases, schedule)
    return np.exp(1j * phases) @ like / size


def snl_sharpness(N: int, schedule=None) -> float:
    _check_N(N)
    schedule = default_schedule(N) if schedule is None else np.asarray(schedule, dtype=float)
    if schedule.size != N:
        raise ValueError(f"schedule length {schedule.size} does not match N={N}")
    return float(np.sum(np.abs(_first_fourier(schedule))))


def snl_exact_variance(N: int, schedule=None) -> float:
    """Holevo variance of N independent photons with the optimal estimator."""
    return holevo_from_sharpness(snl_sharpness(N, schedule))


def snl_estimate(u, schedule) -> float | None:
    """Optimal estimate for one record, or ``None`` for a record with no phase information."""
    u = np.asarray(u, dtype=int)
    schedule = np.asarray(schedule, dtype=float)
    if u.shape != schedule.shape:
        raise ValueError("record and schedule lengths differ")
    if np.any((u != 1) & (u != -1)):
        raise ValueError("record entries must be +1 or -1")
    N = schedule.size
    size = 2 * N + 2
    phases = uniform_grid(size)
    cos = np.cos(phases[:, None] - schedule[None, :])
    like = np.prod(0.5 * (1.0 + u[None, :] * cos), axis=1)
    coef = np.sum(np.exp(1j * phases) * like) / size
    if abs(coef) < INFO_FREE_TOL:
        return None
    return float(np.mod(np.angle(coef), 2.0 * np.pi))


@dataclass(frozen=True)
class SnlConfig:
    N: int = 3
    theta_schedule: tuple[float, ...] | None = None
    trials: int = 100_000
    seed: int = 0
    grid_size: int = 64
    schedule: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _check_N(self.N)
        sched = default_schedule(self.N) if self.theta_schedule is None else np.asarray(self.theta_schedule, float)
        if sched.size != self.N:
            raise ValueError(f"schedule length {sched.size} does not match N={self.N}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        check_grid(self.grid_size, self.N)
        object.__setattr__(self, "schedule", sched)


def snl_simulate(config: SnlConfig, mode: str = "exact") -> PhaseSweepResult:
    """Per-phase and unconditional Holevo variance of the sequential-photon experiment.

    In ``mc`` mode each reference setting is probed with ``trials`` photons at
    every grid phase and the record probability is the product of the
    per-setting click frequencies.  Records with no phase information keep
    their probability mass but contribute nothing to the sharpness.
    """
    if mode not in ("exact", "mc"):
        raise ValueError(f"mode must be 'exact' or 'mc', got {mode!r}")
    phases = uniform_grid(config.grid_size)
    u = outcome_vectors(config.N)
    coefs = _first_fourier(config.schedule)
    informative = np.abs(coefs) >= INFO_FREE_TOL
    unit = np.zeros_like(coefs)
    unit[informative] = coefs[informative] / np.abs(coefs[informative])
    if mode == "exact":
        like = record_likelihoods(phases, config.schedule)
    else:
        like = np.empty((phases.size, u.shape[0]))
        for i, phi in enumerate(phases):
            rng = cell_generator(config.seed, i)
            p_plus = 0.5 * (1.0 + np.cos(phi - config.schedule))
            freq_plus = rng.binomial(config.trials, p_plus) / config.trials
            per_photon = np.where(u == 1, freq_plus[None, :], 1.0 - freq_plus[None, :])
            like[i] = np.prod(per_photon, axis=1)
    # exp(i(phi - phi_est)) = exp(i phi) * conj(unit coefficient)
    kernels = np.exp(1j * phases) * (like @ unit.conj())
    meta = {
        "N": config.N,
        "schedule": config.schedule.tolist(),
        "n_outcomes": int(u.shape[0]),
        "n_informative": int(informative.sum()),
        "grid_size": config.grid_size,
    }
    if mode == "mc":
        meta.update(seed=config.seed, trials=config.trials)
    return sweep_from_kernels(phases, kernels, mode, metadata=meta)
