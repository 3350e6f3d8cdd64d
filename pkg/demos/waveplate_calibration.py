"""Half-wave plate dial settings for a handful of phases, checked against the gate model."""

import numpy as np

from hlphase import optics
from hlphase.quantum import phase_gate, reference_phase

print("phase/pi  unknown HWP (deg)  feedforward HWP (deg)")
for row in optics.calibration_table(np.pi * np.arange(8) / 4):
    print(
        f"{row['phase'] / np.pi:7.3f}  {np.degrees(row['unknown_hwp_angle']):17.3f}"
        f"  {np.degrees(row['feedforward_hwp_angle']):20.3f}"
    )

grid = np.linspace(0, 2 * np.pi, 64, endpoint=False)
agree = all(
    optics.equal_up_to_phase(optics.optical_gate(phi, theta, passes), reference_phase(theta) @ phase_gate(passes, phi))
    for phi in grid
    for theta in grid[::8]
    for passes in (1, 2)
)
print("\nwaveplate stages reproduce the logical gates:", agree)
