"""How white noise on the probe erodes the variance.

Mixes the optimal probe with the maximally mixed state and reports fidelity,
purity and the exact unconditional variance at each mixing weight.
"""

import numpy as np

from hlphase import exact_variance, optimal_state
from hlphase.hpea import depolarized
from hlphase.quantum import fidelity, purity

print("lambda  fidelity  purity   variance")
for lam in np.linspace(0.0, 1.0, 11):
    rho = depolarized(optimal_state(), lam)
    v = exact_variance(rho)
    shown = "inf" if np.isinf(v) else f"{v:.4f}"
    print(f"{lam:5.2f}   {fidelity(rho, optimal_state()):.4f}    {purity(rho):.4f}   {shown}")
