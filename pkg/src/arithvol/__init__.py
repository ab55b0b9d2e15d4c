"""Arithmetic volumes, Okounkov bodies, concave transforms and Zariski
decompositions for torus-symmetric divisors on projective space over the
integers, validated throughout by a brute-force section-counting oracle."""

from .convexcore import (GridConvexFunction, Polytope, Region, convex_hull,
                         constrained_convex_minorant, integrate_positive_part,
                         legendre_conjugate, shifted_simplex,
                         sliced_interior_nonempty)
from .divisor import (BaseCondition, CanonicalFamily, ConcaveTransform,
                      FiltrationSummary, SampledConvex, ToricArithDivisor,
                      add_divisors, canonical_divisor, concave_transform,
                      divisor_from_record, divisor_record, filtration_summary,
                      is_big, is_effective, make_divisor,
                      mu_monotone_continuity_profile, mu_R, principal_twist,
                      multiplicity_law_suite, scale_divisor, sup_norm_monomial,
                      positive_region, vol_hat, vol_hat_base, with_twist)
from .okounkov import (MonomialSeries, SemigroupPoints, ValuationFlag,
                       dim_via_valuations, full_series, identity_flag,
                       mult_first_coordinate, okounkov_body, ord_lex,
                       semigroup_points)
from .oracle import (enumerate_sections, log_count, mu_Q_approx,
                     normalized_log_count, sup_norm_numeric)
from .zariski import (Decomposition, NefCertificate, RotInvariantDivisor,
                      check_multiplicity_identity, deg_self_intersection,
                      greatest_nef_minorant, nef_certificate,
                      nef_comparison_check, rot_from_toric, verify_zariski,
                      vol_rot)

__version__ = "0.1.0"
