"""Zariski decomposition on the arithmetic surface.

A big divisor on the projective line over the integers splits uniquely into
a nef positive part and an effective negative part with the same volume.
The negative coefficients equal the asymptotic multiplicities at the two
torus-fixed sections, and the positive part dominates every nef minorant.
"""

from arithvol import (canonical_divisor, check_multiplicity_identity,
                      deg_self_intersection, greatest_nef_minorant,
                      verify_zariski)

for a in ([2, 2], [0.25, 2], [0.4, 0.8]):
    dv = canonical_divisor(a)
    dec = greatest_nef_minorant(dv)
    rep = verify_zariski(dv, dec)
    mu = check_multiplicity_identity(dv, dec)
    print(f"a = {a}:")
    print(f"  negative coefficients: delta0 = {dec.negative.e0:.6f}, "
          f"delta1 = {dec.negative.e1:.6f}")
    print(f"  volumes: input {rep['vol_input']:.6f}, positive {rep['vol_positive']:.6f}")
    print(f"  verified: nef={rep['nef']} effective={rep['effective']} "
          f"vol_equal={rep['vol_equal']}")
    print(f"  multiplicity identity at z=0: mu = {mu['z0']['mu']:.6f} "
          f"vs mult_N = {mu['z0']['mult_N']:.6f}")
    print()

print("self-intersection of nef divisors equals their volume:")
print(f"  canonically metrized hyperplane, a = (1, 1): "
      f"{deg_self_intersection(canonical_divisor([1, 1])):.6f}  (known value 1/2)")
