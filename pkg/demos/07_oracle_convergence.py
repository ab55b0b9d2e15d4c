"""The brute-force oracle: counting integral sections against closed forms.

Counting the lattice box of integral monomial sections of n times the
divisor and normalizing by n^(d+1)/(d+1)! recovers the arithmetic volume as
n grows; the same count with base conditions recovers the cut volume.
"""

from arithvol import (BaseCondition, canonical_divisor, normalized_log_count,
                      vol_hat, vol_hat_base)

dv = canonical_divisor([2, 2])
target = vol_hat(dv)
print(f"closed-form volume for a = (2, 2): {target:.6f}")
print("normalized box counts:")
for n in (25, 50, 100, 200, 400):
    est = normalized_log_count(dv, n)
    print(f"  n = {n:>3}: {est:.6f}  (gap {est - target:+.6f})")

cond = [BaseCondition("hyperplane", 1, 0.5)]
target_base = vol_hat_base(dv, cond)
print(f"\nwith the vanishing bound 1/2 at z = 0 the target is {target_base:.6f}:")
for n in (100, 200, 400):
    est = normalized_log_count(dv, n, cond)
    print(f"  n = {n:>3}: {est:.6f}  (gap {est - target_base:+.6f})")

print("\nthe same machinery on the projective plane, a = (1, 2, 4):")
dv2 = canonical_divisor([1, 2, 4])
target2 = vol_hat(dv2)
for n in (20, 40, 60):
    est = normalized_log_count(dv2, n)
    print(f"  n = {n:>2}: {est:.6f}  vs volume {target2:.6f}")
