"""
How the nonlinearity depends on pulse length
============================================

Sweeps T over three decades and prints two measures of the nonlinear
effect.  The relative suppression of psi3 falls monotonically with T,
while the absolute weight of the nonlinear correction peaks for pulses
about as long as the atomic response time.
"""

from twophoton.cli import sweep_point, sweep_values

print("     T   1-|psi3|/|absabs|  |delta|   total/psi1 @ tau=0")
for T in sweep_values(0.1, 100.0, 10):
    row = sweep_point(float(T))
    print(f"{T:7.3f}   {row['nonlinearity_metric']:14.4f}  {row['nonlinear_weight']:8.4f}"
          f"   {row['total_to_psi1_ratio_tau0']:8.3f}")
