"""Heisenberg-limited phase estimation with multipass and adaptive feedforward.

With ``K + 1`` photons, photon ``m`` (measured ``m``-th) samples the unknown
phase ``2**(K - m)`` times, for ``N = 2**(K + 1) - 1`` resources in total.
Photons are measured one at a time in the X basis.  With feedforward on, the
reference phase on photon ``m`` is ``theta_m = pi * sum_{j<m} bit_j / 2**(m - j)``,
which for ``K = 1`` is ``R(pi/2)`` on the second photon after an ``a`` click.

The bit of photon ``m`` is 1 for an ``a`` result and the estimate is
``2 pi * sum_m bit_m 2**m / 2**(K + 1)``; photon 0 supplies the least
significant bit.  For ``K = 1`` that reads dd -> 0, ad -> pi/2, da -> pi,
aa -> 3 pi/2, with the first letter the multi-pass photon.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .holevo import (
    PhaseSweepResult,
    check_grid,
    holevo_from_sharpness,
    mean_kernel,
    sweep_from_kernels,
    uniform_grid,
)
from .quantum import (
    PHI_PLUS,
    PSI_PLUS,
    DensityMatrix,
    PureState,
    _apply_1q,
    _branch,
    apply_cnot,
    apply_on_qubit,
    as_density_matrix,
    measure_x,
    phase_gate,
    reference_phase,
)
from .streams import cell_generator

DEFAULT_GRID = 64


def heisenberg_limit(N: int) -> float:
    """Minimum Holevo variance ``tan(pi / (N + 2))**2`` for ``N`` resources."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be an integer >= 1, got {N!r}")
    return math.tan(math.pi / (N + 2)) ** 2


def resources(K: int) -> int:
    return 2 ** (K + 1) - 1


def optimal_coefficients(K: int = 1) -> tuple[float, float]:
    """Bell-basis weights ``(c0, c1)`` of the optimal two-photon probe."""
    if K != 1:
        raise ValueError(f"optimal probe is only available for K=1, got K={K}")
    s = np.sin(np.array([1, 2]) * np.pi / 5)
    c = s / np.sqrt(np.sum(s**2))
    return float(c[0]), float(c[1])


def optimal_state(K: int = 1) -> PureState:
    """``c0 |Phi+> + c1 |Psi+>``, the probe that saturates the limit at N=3."""
    c0, c1 = optimal_coefficients(K)
    return PureState(c0 * PHI_PLUS + c1 * PSI_PLUS)


def prepare_via_cnot(c0: float, c1: float) -> PureState:
    """CNOT on control ``(|0> + |1>)/sqrt 2`` and target ``c0|0> + c1|1>``."""
    if abs(c0**2 + c1**2 - 1.0) > 1e-10:
        raise ValueError(f"target amplitudes must satisfy c0^2 + c1^2 = 1, got {c0**2 + c1**2!r}")
    control = np.array([1.0, 1.0]) / np.sqrt(2.0)
    target = np.array([c0, c1], dtype=complex)
    product = np.kron(control, target)
    return apply_cnot(PureState(product / np.linalg.norm(product)), control=0, target=1)


def outcome_labels(K: int = 1) -> tuple[str, ...]:
    """Detector labels indexed by ``sum_m bit_m 2**m``; letters in measurement order."""
    n = K + 1
    return tuple("".join("da"[(i >> m) & 1] for m in range(n)) for i in range(2**n))


def outcome_estimates(K: int = 1) -> np.ndarray:
    n = K + 1
    return 2.0 * np.pi * np.arange(2**n) / 2**n


def estimate_from_bits(*bits: int) -> float:
    """Phase estimate from measurement bits, least significant (first photon) first."""
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"bits must be 0 or 1, got {bits!r}")
    index = sum(b << m for m, b in enumerate(bits))
    return 2.0 * np.pi * index / 2 ** len(bits)


def _feedforward_angle(prefix: tuple[int, ...]) -> float:
    m = len(prefix)
    return float(np.pi * sum(b / 2 ** (m - j) for j, b in enumerate(prefix)))


def _stage_gate(K: int, prefix: tuple[int, ...], phi: float, feedforward: bool) -> np.ndarray:
    """Gate on the next photon to be measured, given the earlier bits."""
    m = len(prefix)
    gate = phase_gate(2 ** (K - m), phi)
    if feedforward and m > 0:
        gate = reference_phase(_feedforward_angle(prefix)) @ gate
    return gate


def _protocol_qubits(rho: DensityMatrix) -> int:
    n = rho.num_qubits
    if n < 2:
        raise ValueError("the protocol needs at least two photons")
    return n - 1


@dataclass(frozen=True)
class OutcomeDistribution:
    """Outcome probabilities at one true phase, indexed like :func:`outcome_labels`."""

    probabilities: np.ndarray
    true_phase: float

    @property
    def K(self) -> int:
        return int(np.log2(len(self.probabilities))) - 1

    @property
    def labels(self) -> tuple[str, ...]:
        return outcome_labels(self.K)

    def as_dict(self) -> dict[str, float]:
        return {lab: float(p) for lab, p in zip(self.labels, self.probabilities)}

    def __getitem__(self, label: str) -> float:
        return float(self.probabilities[self.labels.index(label)])


def branch_probabilities(rho: DensityMatrix, phi: float, feedforward: bool = True) -> dict[tuple[int, ...], float]:
    """Probability of ``d`` at each node of the sequential measurement tree.

    Keys are the bit prefixes measured so far; unreachable nodes get 0.5.
    """
    K = _protocol_qubits(rho)
    table: dict[tuple[int, ...], float] = {}

    def walk(prefix: tuple[int, ...], reduced: np.ndarray | None):
        n = K + 1 - len(prefix)
        if n == 0:
            return
        if reduced is None:
            table[prefix] = 0.5
            for b in (0, 1):
                walk(prefix + (b,), None)
            return
        prepared = _apply_1q(_stage_gate(K, prefix, phi, feedforward), 0, reduced, n)
        p_d, rest_d = _branch(prepared, n, 0, 0)
        p_a, rest_a = _branch(prepared, n, 0, 1)
        table[prefix] = p_d / (p_d + p_a)
        walk(prefix + (0,), rest_d)
        walk(prefix + (1,), rest_a)

    walk((), np.asarray(rho.data))
    return table


def outcome_distribution_exact(state, phi: float, feedforward: bool = True) -> OutcomeDistribution:
    """Exact outcome probabilities at true phase ``phi``."""
    rho = as_density_matrix(state)
    K = _protocol_qubits(rho)
    table = branch_probabilities(rho, phi, feedforward)
    probs = np.empty(2 ** (K + 1))
    for index in range(probs.size):
        bits = tuple((index >> m) & 1 for m in range(K + 1))
        p = 1.0
        for m, b in enumerate(bits):
            p_d = table[bits[:m]]
            p *= p_d if b == 0 else 1.0 - p_d
        probs[index] = p
    return OutcomeDistribution(probs, float(phi))


@dataclass(frozen=True)
class ShotRecord:
    bits: tuple[int, ...]
    estimate: float
    true_phase: float

    @property
    def label(self) -> str:
        return "".join("da"[b] for b in self.bits)


def run_single_shot(state, phi: float, feedforward: bool, draws: Sequence[float]) -> ShotRecord:
    """One pass through the measurement chain, photon by photon.

    Each photon's result is decided by comparing its uniform draw with the
    probability of ``d``; the collapsed state of the rest carries on.
    """
    rho = as_density_matrix(state)
    K = _protocol_qubits(rho)
    if len(draws) != K + 1:
        raise ValueError(f"need {K + 1} draws, got {len(draws)}")
    bits: list[int] = []
    current: DensityMatrix | None = rho
    for m in range(K + 1):
        assert current is not None
        current = apply_on_qubit(_stage_gate(K, tuple(bits), phi, feedforward), 0, current)
        outcome = measure_x(current, 0, float(draws[m]))
        bits.append(outcome.bit)
        current = outcome.collapsed
    return ShotRecord(tuple(bits), estimate_from_bits(*bits), float(phi))


def sample_outcomes(state, phi: float, feedforward: bool, draws: np.ndarray) -> np.ndarray:
    """Outcome indices for a batch of shots; ``draws`` has one row per shot.

    Same decision rule as :func:`run_single_shot`, so equal draws give equal
    outcomes, but the branch probabilities are computed once per phase.
    """
    rho = as_density_matrix(state)
    K = _protocol_qubits(rho)
    draws = np.atleast_2d(np.asarray(draws, dtype=float))
    table = branch_probabilities(rho, phi, feedforward)
    index = np.zeros(draws.shape[0], dtype=np.int64)
    for m in range(K + 1):
        p_d = np.empty(draws.shape[0])
        for prefix_index in range(2**m):
            prefix = tuple((prefix_index >> j) & 1 for j in range(m))
            p_d[index == prefix_index] = table[prefix]
        index |= (draws[:, m] >= p_d).astype(np.int64) << m
    return index


def _estimates_for(n_outcomes: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n_outcomes) / n_outcomes


def conditional_kernel(dist, true_phase: float | None = None) -> complex:
    """Complex mean of ``exp(i(phi - phi_est))`` for one true phase.

    ``dist`` may be an :class:`OutcomeDistribution`, a mapping from detector
    labels to probabilities or counts, or a sequence of :class:`ShotRecord`.
    """
    if isinstance(dist, OutcomeDistribution):
        phase = dist.true_phase if true_phase is None else true_phase
        return mean_kernel(dist.probabilities, _estimates_for(dist.probabilities.size), phase)
    if true_phase is None:
        raise ValueError("true_phase is required for this input")
    if isinstance(dist, Mapping):
        weights = _counts_vector(dist)
        return mean_kernel(weights, _estimates_for(weights.size), true_phase)
    records = list(dist)
    if not records:
        raise ValueError("no samples given")
    est = np.array([r.estimate for r in records])
    return mean_kernel(np.ones(est.size), est, true_phase)


def conditional_holevo(dist, true_phase: float | None = None) -> float:
    """Conditional Holevo variance ``mu(phi)**-2 - 1`` (``inf`` when ``mu`` vanishes)."""
    return holevo_from_sharpness(abs(conditional_kernel(dist, true_phase)))


def _counts_vector(counts: Mapping) -> np.ndarray:
    keys = list(counts)
    width = len(next(iter(keys))) if keys else 2
    labels = outcome_labels(width - 1)
    vec = np.zeros(len(labels))
    for key, value in counts.items():
        if isinstance(key, tuple):
            key = "".join("da"[b] for b in key)
        if key not in labels:
            raise ValueError(f"unknown outcome label {key!r}")
        vec[labels.index(key)] += float(value)
    return vec


def true_phase_from_record(counts: Mapping) -> float:
    """Phase implied by outcome counts: argument of the count-weighted ``exp(i phi_est)``."""
    vec = _counts_vector(counts)
    if vec.sum() <= 0:
        raise ValueError("record has no counts")
    z = np.sum(vec * np.exp(1j * _estimates_for(vec.size)))
    return float(np.mod(np.angle(z), 2.0 * np.pi))


@dataclass(frozen=True)
class ProtocolConfig:
    input_state: DensityMatrix
    feedforward: bool = True
    trials_per_phase: int = 100_000
    master_seed: int = 0
    grid_size: int = DEFAULT_GRID

    def __post_init__(self):
        object.__setattr__(self, "input_state", as_density_matrix(self.input_state))
        K = _protocol_qubits(self.input_state)
        if self.trials_per_phase < 1:
            raise ValueError("trials_per_phase must be >= 1")
        check_grid(self.grid_size, resources(K))

    @property
    def K(self) -> int:
        return self.input_state.num_qubits - 1

    @property
    def N(self) -> int:
        return resources(self.K)


def _sweep_cell(args) -> tuple[np.ndarray, np.ndarray | None]:
    config, mode, index, phi = args
    if mode == "exact":
        return outcome_distribution_exact(config.input_state, phi, config.feedforward).probabilities, None
    rng = cell_generator(config.master_seed, index)
    draws = rng.random((config.trials_per_phase, config.K + 1))
    outcomes = sample_outcomes(config.input_state, phi, config.feedforward, draws)
    counts = np.bincount(outcomes, minlength=2 ** (config.K + 1))
    return counts / config.trials_per_phase, counts


def phase_sweep(config: ProtocolConfig, mode: str = "exact", offset: float = 0.0, workers: int = 1) -> PhaseSweepResult:
    """Conditional and unconditional Holevo variance over a uniform phase grid.

    ``mode="exact"`` uses the exact outcome probabilities; ``mode="mc"``
    samples ``trials_per_phase`` shots at each grid phase from a per-phase
    random stream, so results do not depend on ``workers``.
    """
    if mode not in ("exact", "mc"):
        raise ValueError(f"mode must be 'exact' or 'mc', got {mode!r}")
    phases = uniform_grid(config.grid_size, offset)
    cells = [(config, mode, i, float(phi)) for i, phi in enumerate(phases)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        results = [_sweep_cell(c) for c in cells]
    probs = np.array([r[0] for r in results])
    est = outcome_estimates(config.K)
    kernels = np.array([np.sum(p * np.exp(1j * (phi - est))) for p, phi in zip(probs, phases)])
    meta = {"N": config.N, "K": config.K, "feedforward": config.feedforward, "grid_size": config.grid_size}
    if mode == "mc":
        meta.update(seed=config.master_seed, trials_per_phase=config.trials_per_phase)
        meta["counts"] = np.array([r[1] for r in results])
    return sweep_from_kernels(phases, kernels, mode, probs, outcome_labels(config.K), meta)


def unconditional_holevo(sweep: PhaseSweepResult, method: str = "direct") -> float:
    """Unconditional variance of a sweep.

    ``direct`` averages the complex kernel over phases; ``recombined`` builds
    the same number from the per-phase conditional variances and kernel
    arguments.  The two agree to rounding on an exact sweep.
    """
    if method == "direct":
        return sweep.unconditional_variance
    if method == "recombined":
        return sweep.recombined_variance()
    raise ValueError(f"unknown method {method!r}")


def exact_variance(state, feedforward: bool = True, grid_size: int = DEFAULT_GRID) -> float:
    """Unconditional Holevo variance of the protocol for ``state`` (exact mode)."""
    config = ProtocolConfig(as_density_matrix(state), feedforward=feedforward, grid_size=grid_size)
    return phase_sweep(config, "exact").unconditional_variance


def depolarized(state, weight: float) -> DensityMatrix:
    """``(1 - weight) rho + weight * I / d``."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    rho = as_density_matrix(state)
    dim = rho.data.shape[0]
    return DensityMatrix((1.0 - weight) * rho.data + weight * np.eye(dim) / dim)


def bootstrap_variance_ci(
    phases,
    counts,
    resamples: int = 1000,
    seed: int = 0,
    level: float = 0.95,
) -> tuple[float, float]:
    """Percentile bootstrap interval for the unconditional Holevo variance.

    ``counts`` has one row of outcome counts per grid phase.  Shots are
    resampled with replacement within each phase.
    """
    if resamples < 100:
        raise ValueError(f"need at least 100 resamples, got {resamples}")
    phases = np.asarray(phases, dtype=float)
    counts = np.asarray(counts, dtype=np.int64)
    if counts.ndim != 2 or counts.shape[0] != phases.size:
        raise ValueError("counts must have one row per phase")
    totals = counts.sum(axis=1)
    if np.any(totals < 2):
        raise ValueError("every phase needs at least two recorded shots")
    rng = cell_generator(seed, 0)
    est = _estimates_for(counts.shape[1])
    phase_factor = np.exp(1j * (phases[:, None] - est[None, :]))
    kernels = np.empty((resamples, phases.size), dtype=complex)
    for i, (row, n) in enumerate(zip(counts, totals)):
        draws = rng.multinomial(n, row / n, size=resamples)
        kernels[:, i] = draws @ phase_factor[i] / n
    mu = np.abs(kernels.mean(axis=1))
    with np.errstate(divide="ignore"):
        variances = np.where(mu < 1e-15, np.inf, mu**-2 - 1.0)
    tail = 100.0 * (1.0 - level) / 2.0
    low, high = np.percentile(variances, [tail, 100.0 - tail])
    return float(low), float(high)
