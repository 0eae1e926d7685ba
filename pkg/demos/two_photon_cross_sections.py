"""
Two long photons: cross-sections at fixed separation
====================================================

For two photons in the same long pulse the output is a 2-D amplitude.
Slicing it at a fixed separation tau shows how the atom's saturation
matters only when the photons arrive close together.
"""

from twophoton import component_ratio_profile, cross_section, default_grid, make_gaussian, two_photon_output
from twophoton.observables import find_peak

T = 10.0
pulse = make_gaussian(T)
dec = two_photon_output(pulse, default_grid(T))

print(" tau   psi2/psi1  psi3/psi1  total/psi1  total delay")
for tau in (0.0, 0.5, 1.0, 1.4, 2.0, 3.0, 5.0):
    prof = component_ratio_profile(dec, tau)
    pk = prof.peaks["total"]
    delay = "   --" if pk is None else f"{pk.delay - prof.reference.delay:7.3f}"
    r = prof.ratios
    print(f"{tau:4.1f}  {r['psi2']:9.3f}  {r['psi3']:9.3f}  {r['total']:10.3f}  {delay}")

# At tau = 0 the absorption-absorption part vanishes: the saturated atom
# cannot re-emit both photons at once.
diag = cross_section(dec.psi3, 0.0)
print("max |psi3| on the diagonal:", abs(diag.amplitudes).max())

# Near tau = 1.4 the total slice almost disappears.
slice14 = cross_section(dec.total, 1.4)
ref14 = find_peak(cross_section(dec.psi1, 1.4))
print(f"max |total| at tau=1.4 relative to input: {abs(slice14.amplitudes).max() / ref14.peak_value:.3f}")
