"""Volumes with base conditions, and the strict drop above the multiplicity.

Requiring sections to vanish to order n*mu at a center cuts the body (for
horizontal centers) or lowers the integrand (for vertical fibers).  As soon
as the bound exceeds the asymptotic multiplicity of the divisor at that
center, the volume drops strictly.
"""

import math

import numpy as np

from arithvol import BaseCondition, canonical_divisor, mu_R, vol_hat, vol_hat_base

dv = canonical_divisor([2, 2])
v = vol_hat(dv)
print(f"input volume: {v:.6f}")
print(f"multiplicity at z = 0: {mu_R(dv, BaseCondition('hyperplane', 1, 0.0))}")
print()
print("volume under a vanishing bound mu at z = 0:")
for mu in np.linspace(0, 1, 6):
    vb = vol_hat_base(dv, [BaseCondition("hyperplane", 1, float(mu))])
    print(f"  mu = {mu:.1f}: vol = {vb:.6f}" + ("  (strict drop)" if vb < v - 1e-9 else ""))

print()
print("the reference point mu = 1/2 has the closed value log(2)/2 + 1/4 =",
      round(0.5 * math.log(2) + 0.25, 6))

print()
print("a vertical fiber condition at p = 2 lowers the integrand by mu log 2:")
for mu in (0.0, 0.25, 0.5):
    vb = vol_hat_base(dv, [BaseCondition("fiber", 2, mu)])
    print(f"  mu = {mu:.2f}: vol = {vb:.6f}")

print()
print("several conditions combine (cut and lower together):")
vb = vol_hat_base(dv, [BaseCondition("hyperplane", 1, 0.25),
                       BaseCondition("fiber", 2, 0.25)])
print(f"  hyperplane 0.25 + fiber 0.25: vol = {vb:.6f}")
