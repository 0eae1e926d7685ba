"""
Pulses as short as the atomic response time
===========================================

With T = 1 the absorbed part no longer follows the input adiabatically.
The one-photon output changes sign, and the two-photon output is
dominated by the nonlinear correction near the diagonal.
"""

import numpy as np

from twophoton import component_ratio_profile, default_grid, make_gaussian, one_photon_output, two_photon_output

T = 1.0
pulse = make_gaussian(T)
grid = default_grid(T)
x = grid.points

one = one_photon_output(pulse, grid)
front = x[np.argmax(one.total.amplitudes)]
print(f"one photon: largest positive output {one.total.amplitudes.max():.4f} at x = {front:.2f}")
print(f"            most negative output   {one.total.amplitudes.min():.4f} at x = {x[np.argmin(one.total.amplitudes)]:.2f}")

two = two_photon_output(pulse, grid)
for tau in (0.0, 1.0):
    prof = component_ratio_profile(two, tau)
    print(f"tau={tau:g}: ratios to psi1", {k: round(v, 3) for k, v in prof.ratios.items()})

# The total is mostly negative but not everywhere: a small positive lobe
# survives where both photons leave early and well apart.
total = two.total.amplitudes
i, j = np.unravel_index(np.argmax(total), total.shape)
print(f"largest positive total {total[i, j]:.5f} at (x1, x2) = ({x[i]:.2f}, {x[j]:.2f});"
      f" most negative {total.min():.4f}")
print(f"fraction of grid with positive total: {np.mean(total > 0):.3f}")
