"""Arithmetic volumes of the canonical divisor family, and where they vanish.

The divisor is the hyperplane at infinity on the projective line over the
integers, metrized by log(a0 + a1 |z|^2).  Its arithmetic volume has the
closed entropy form and is positive exactly when a0 + a1 > 1.
"""

import math

import numpy as np

from arithvol import canonical_divisor, vol_hat

print("volumes of (H_0, log(a0 + a1 |z|^2)) on the projective line:")
for a in ([1, 1], [2, 2], [0.25, 2], [0.25, 0.25]):
    print(f"  a = {a}: vol = {vol_hat(canonical_divisor(a)):.6f}")

print()
print("reference values: 1/2 and log(2) + 1/2 =", round(math.log(2) + 0.5, 6))

print()
print("bigness threshold a0 + a1 = 1 (volumes for a0 = 0.4):")
for a1 in np.linspace(0.3, 0.9, 7):
    v = vol_hat(canonical_divisor([0.4, float(a1)]))
    marker = "big" if v > 0 else "not big"
    print(f"  a1 = {a1:.2f}: vol = {v:.6f}  ({marker})")

print()
print("a surface example: weights (1, 2, 4) on the projective plane")
v = vol_hat(canonical_divisor([1, 2, 4]))
print(f"  vol = {v:.6f}   (closed form 1.5 log 2 + 1.25 = "
      f"{1.5 * math.log(2) + 1.25:.6f})")
