"""Walk through one exact sweep of the two-photon estimator, then check it by sampling.

Run with ``python demos/heisenberg_sweep.py``.
"""

import numpy as np

from hlphase import ProtocolConfig, heisenberg_limit, optimal_state, phase_sweep
from hlphase.hpea import optimal_coefficients, outcome_labels

c0, c1 = optimal_coefficients()
print(f"probe amplitudes: c0={c0:.6f} c1={c1:.6f}")

exact = phase_sweep(ProtocolConfig(optimal_state(), grid_size=16), "exact")
print("\n phi/pi   V(phi)   " + "  ".join(f"P_{lab}" for lab in outcome_labels()))
for phi, v, p in zip(exact.phases, exact.conditional_variance, exact.probabilities):
    print(f"{phi / np.pi:6.3f}  {v:7.4f}   " + "  ".join(f"{x:5.3f}" for x in p))

print(f"\nunconditional variance {exact.unconditional_variance:.10f}")
print(f"bound tan^2(pi/5)      {heisenberg_limit(3):.10f}")

mc = phase_sweep(ProtocolConfig(optimal_state(), trials_per_phase=100_000, master_seed=1, grid_size=16), "mc")
print(f"sampled, 1e5 shots per phase: {mc.unconditional_variance:.4f}")

off = phase_sweep(ProtocolConfig(optimal_state(), feedforward=False, grid_size=16), "exact")
print(f"without the feedforward rotation: {off.unconditional_variance:.4f}")
