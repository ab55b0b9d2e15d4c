"""Asymptotic multiplicities: closed forms, twist profiles, level bounds.

The multiplicity at a center is the minimum of a linear functional over the
positive region of the transform; it vanishes for nef-and-big divisors, is
monotone and continuous in the twist, and is approximated from above by
level-n section searches.
"""

import numpy as np

from arithvol import (BaseCondition, canonical_divisor, mu_R,
                      mu_monotone_continuity_profile, mu_Q_approx)

center = BaseCondition("hyperplane", 1, 0.0)

print("multiplicity at z = 0 across the family:")
for a in ([2, 2], [1, 1], [0.25, 2], [0.15, 3.0]):
    print(f"  a = {a}: mu = {mu_R(canonical_divisor(a), center):.6f}")

print("\nlevel-n upper bounds converging from above (a = (0.25, 2)):")
dv = canonical_divisor([0.25, 2])
res = mu_Q_approx(dv, center, list(range(1, 121)))
for n, v in res.values[::24] + (res.values[-1],):
    print(f"  n <= {n:>3}: bound {v:.6f}")
print(f"  target mu = {mu_R(dv, center):.6f}")

print("\ntwist profile (monotone decreasing, then identically zero):")
profile = mu_monotone_continuity_profile(dv, np.linspace(0, 1.6, 9), center)
for lam, mu in profile:
    print(f"  twist {lam:.2f}: mu = {mu:.6f}")
