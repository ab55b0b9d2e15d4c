"""The concave transform of a divisor and its positive region.

The transform G lives on the divisor body (an interval for the projective
line); the twist shifts it by a constant, and the closure of {G > 0} is the
region whose integral gives the volume.
"""

import numpy as np

from arithvol import canonical_divisor, concave_transform, positive_region, with_twist

dv = canonical_divisor([0.25, 2])
transform = concave_transform(dv)

print("transform of the (0.25, 2) divisor, sampled on the body [0, 1]:")
for x in np.linspace(0, 1, 11):
    bar = "#" * max(0, int(40 * transform(float(x)) + 20) - 20)
    print(f"  G({x:.1f}) = {transform(float(x)):+.4f} {bar}")

lo, hi = positive_region(dv).interval()
print(f"\npositive region: [{lo:.6f}, {hi:.6f}]")
print("(the left endpoint is the asymptotic multiplicity at z = 0)")

print("\ntwisting by a Green constant moves the transform up by half of it:")
for lam in (0.0, 0.5, 1.0, 1.5):
    lo, hi = positive_region(with_twist(dv, lam)).interval()
    print(f"  twist {lam:.1f}: positive region [{lo:.4f}, {hi:.4f}]")
