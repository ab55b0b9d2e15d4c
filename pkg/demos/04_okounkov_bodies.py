"""Valuation semigroups of monomial series and their convex bodies.

The rank-d lexicographic valuation at the torus-fixed flag sends each
monomial to its exponent vector; level-normalized images of a graded series
hull out to a convex body whose volume tracks the dimension growth.
"""

import math

from arithvol import (dim_via_valuations, full_series, identity_flag,
                      okounkov_body, semigroup_points)
from arithvol.okounkov import filtered_series

flag = identity_flag(2)
series = full_series(2, 6)
points = semigroup_points(series, flag)

print("complete series of the hyperplane on the projective plane:")
body = okounkov_body(points, 3)
print(f"  body at level bound 3: vertices {body.vertices.tolist()}, "
      f"volume {body.volume():.4f}")

print("\ndimension counts vs distinct valuations (they agree exactly):")
for s in series[1:5]:
    print(f"  level {s.level}: dim = {dim_via_valuations(s, flag)} "
          f"= C({s.level}+2, 2) = {math.comb(s.level + 2, 2)}")

print("\nvolume vs normalized dimension (the limit identity, d = 2):")
for m in (5, 10, 15, 25):
    pts = semigroup_points(full_series(2, m), flag, check_grading=False)
    vol = okounkov_body(pts, m).volume()
    ratio = math.comb(m + 2, 2) / m ** 2
    print(f"  m = {m:>2}: vol = {vol:.4f}, dim/m^2 = {ratio:.4f}, gap = {ratio - vol:.4f}")

print("\na base condition along z = 0 truncates the body on the left:")
cut = filtered_series(1, 6, lambda mono, lvl: mono[0] >= 0.5 * lvl)
body1 = okounkov_body(semigroup_points(cut, identity_flag(1)), 6)
print(f"  body on the line with bound 1/2: {sorted(body1.vertices.ravel().tolist())}")
