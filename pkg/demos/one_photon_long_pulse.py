"""
A single long photon passing the atom
=====================================

A Gaussian photon much longer than the atomic response time comes out
with its sign flipped and delayed by about 2 time units.  The absorbed and
re-emitted part alone is twice as large as the input.
"""

import numpy as np

from twophoton import CrossSection, default_grid, find_peak, make_gaussian, one_photon_output

T = 10.0
pulse = make_gaussian(T)
grid = default_grid(T)
out = one_photon_output(pulse, grid)
x = grid.points

# Peaks are refined with a parabola through the three largest samples.
inp = find_peak(CrossSection(0.0, x, out.prop.amplitudes))
total = find_peak(CrossSection(0.0, x, out.total.amplitudes))
absorbed = find_peak(CrossSection(0.0, x, out.abs.amplitudes))

print(f"grid: {grid.point_count} points, spacing {grid.spacing:.3f}")
print(f"output peak / input peak   = {total.peak_value / inp.peak_value:+.4f}")
print(f"output delay               = {total.delay - inp.delay:.4f}")
print(f"|absorbed| peak / input    = {abs(absorbed.peak_value) / inp.peak_value:.4f}")
print(f"absorbed delay             = {absorbed.delay - inp.delay:.4f}")

# Compare with the long-pulse picture: output = -input shifted by 2.
shifted = -pulse(x + 2.0)
err = np.max(np.abs(out.total.amplitudes - shifted)) / pulse.peak_amplitude
print(f"max deviation from -psi(x + 2), relative to peak: {err:.2e}")
