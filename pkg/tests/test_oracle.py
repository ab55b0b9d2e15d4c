"""Brute-force oracle: enumeration, box counts, multiplicity bounds, norms."""

import math

import pytest

from arithvol.divisor import (BaseCondition, canonical_divisor, mu_R,
                              principal_twist, sup_norm_monomial, vol_hat,
                              vol_hat_base, with_twist)
from arithvol.oracle import (enumerate_sections, exact_ball_log_count,
                             log_count, mu_Q_approx, normalized_log_count,
                             sup_norm_numeric)

LOG2 = math.log(2)


class TestEnumeration:
    def test_radii_11_level2(self):
        enum = enumerate_sections(canonical_divisor([1, 1]), 2)
        got = {e.exponents: float(e.radius_sq) ** 0.5 for e in enum.entries}
        assert got == pytest.approx({(0,): 1.0, (1,): 2.0, (2,): 1.0})

    def test_horizontal_condition_filters(self):
        enum = enumerate_sections(canonical_divisor([1, 1]), 2,
                                  [BaseCondition("hyperplane", 1, 1.0)])
        assert [e.exponents for e in enum.entries] == [(2,)]

    def test_non_big_all_radii_below_one(self):
        enum = enumerate_sections(canonical_divisor([0.25, 0.25]), 10)
        assert all(e.radius_sq < 1 for e in enum.entries)

    def test_deterministic_order(self):
        enum = enumerate_sections(canonical_divisor([1, 2, 4]), 3)
        exps = [e.exponents for e in enum.entries]
        assert exps == sorted(exps)


class TestLogCount:
    def test_zero_when_no_sections(self):
        assert log_count(canonical_divisor([0.25, 0.25]), 10) == 0.0

    def test_volume_trend_22(self):
        dv = canonical_divisor([2, 2])
        target = LOG2 + 0.5
        vals = [normalized_log_count(dv, n) for n in (100, 200, 400)]
        gaps = [abs(v - target) for v in vals]
        assert gaps[0] > gaps[1] - 0.02 > gaps[2] - 0.04
        assert gaps[-1] < 0.05

    def test_vertical_condition_limit(self):
        # sections divisible by 2^{n/2}: the count converges to the volume of
        # the transform lowered by log(2)/2, which is the weights-(1,1) value
        dv = canonical_divisor([2, 2])
        est = normalized_log_count(dv, 400, [BaseCondition("fiber", 2, 0.5)])
        closed = vol_hat_base(dv, [BaseCondition("fiber", 2, 0.5)])
        assert closed == pytest.approx(0.5, abs=1e-6)
        assert abs(est - closed) < 0.05

    def test_superadditive_up_to_log_slack(self):
        for a in ([2, 2], [0.5, 1.5]):
            dv = canonical_divisor(a)
            for n1, n2 in ((10, 15), (20, 40), (50, 50)):
                slack = 2 * 2 * math.log(n1 + n2 + 2)
                assert log_count(dv, n1 + n2) >= (log_count(dv, n1)
                                                  + log_count(dv, n2) - slack)

    def test_exact_path_matches_float_path(self):
        # twist disables the exact rational radii; counts must agree anyway
        dv = canonical_divisor([2, 2])
        tw = with_twist(dv, 0.0)
        for n in (10, 50):
            assert log_count(dv, n) == pytest.approx(log_count(tw, n), abs=1e-9)

    def test_counting_sandwich_tiny_levels(self):
        # exact enumeration of all integral sections in the sup-ball, with
        # membership tested on a dense polar grid, vs the diagonal box count
        dv = canonical_divisor([1.2, 0.05])
        for n in range(1, 13):
            exact = exact_ball_log_count(dv, n)
            box = log_count(dv, n)
            assert exact <= box + 1e-9
            assert abs(exact - box) <= 3 * (n + 1) * math.log(n + 3)


class TestMuQApprox:
    def test_envelope_converges_to_mu(self):
        dv = canonical_divisor([0.25, 2])
        center = BaseCondition("hyperplane", 1, 0.0)
        res = mu_Q_approx(dv, center, list(range(1, 201)))
        vals = [v for _, v in res.values]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
        assert abs(vals[-1] - mu_R(dv, center)) < 0.05
        # every level value is an upper bound
        assert all(v >= mu_R(dv, center) - 1e-12 for v in vals)

    def test_nef_hits_zero_immediately(self):
        res = mu_Q_approx(canonical_divisor([2, 2]),
                          BaseCondition("hyperplane", 1, 0.0), [1, 2, 3])
        assert res.values[0] == (1, 0.0)

    def test_vertical_center_zero(self):
        res = mu_Q_approx(canonical_divisor([2, 2]),
                          BaseCondition("fiber", 2, 0.0), [1])
        assert res.values == ((1, 0.0),)

    def test_non_big_warning(self):
        res = mu_Q_approx(canonical_divisor([0.25, 0.25]),
                          BaseCondition("hyperplane", 1, 0.0), [1, 2, 10])
        assert res.warning is not None
        assert res.values == ()

    def test_at_twisted_divisor(self):
        dv = with_twist(canonical_divisor([0.25, 2]), 0.4)
        center = BaseCondition("hyperplane", 1, 0.0)
        res = mu_Q_approx(dv, center, list(range(1, 121)))
        assert abs(res.values[-1][1] - mu_R(dv, center)) < 0.05


class TestSupNormNumeric:
    def test_golden_section_1d(self):
        dv = canonical_divisor([1, 1])
        assert sup_norm_numeric(dv, 2, [1]) ** 2 == pytest.approx(0.25, rel=1e-8)

    def test_boundary_asymptote(self):
        dv = canonical_divisor([1, 1])
        assert sup_norm_numeric(dv, 3, [3]) ** 2 == pytest.approx(1.0, rel=1e-8)
        dv2 = canonical_divisor([1, 2, 4])
        assert sup_norm_numeric(dv2, 2, (0, 2)) ** 2 == pytest.approx(1 / 16, rel=1e-6)

    def test_constant_at_origin(self):
        dv = canonical_divisor([2, 2])
        assert sup_norm_numeric(dv, 4, [0]) ** 2 == pytest.approx(2.0 ** -4, rel=1e-8)

    def test_norm_consistency_500_random_samples(self, rng):
        # closed form vs numeric maximization, relative 1e-6, d <= 2, n <= 50
        for _ in range(500):
            d = int(rng.integers(1, 3))
            a = rng.uniform(0.1, 5.0, size=d + 1)
            n = int(rng.integers(1, 51))
            if d == 1:
                m = (int(rng.integers(0, n + 1)),)
            else:
                m1 = int(rng.integers(0, n + 1))
                m = (m1, int(rng.integers(0, n - m1 + 1)))
            dv = canonical_divisor(a.tolist())
            closed = sup_norm_monomial(dv, n, m)
            numeric = sup_norm_numeric(dv, n, m)
            assert numeric == pytest.approx(closed, rel=1e-6)

    def test_twisted_norms(self, rng):
        for _ in range(20):
            a = rng.uniform(0.2, 4.0, size=2)
            lam = float(rng.uniform(-0.5, 0.5))
            dv = canonical_divisor(a.tolist(), twist=lam)
            n = int(rng.integers(1, 30))
            m = (int(rng.integers(0, n + 1)),)
            assert sup_norm_numeric(dv, n, m) == pytest.approx(
                sup_norm_monomial(dv, n, m), rel=1e-6)


class TestVolumeAgreement:
    def test_d1_11(self):
        dv = canonical_divisor([1, 1])
        assert abs(normalized_log_count(dv, 400) - vol_hat(dv)) < 0.05

    def test_d2_124_level60(self):
        dv = canonical_divisor([1, 2, 4])
        assert abs(normalized_log_count(dv, 60) - vol_hat(dv)) < 0.15

    def test_base_condition_at_400(self):
        dv = canonical_divisor([2, 2])
        cond = [BaseCondition("hyperplane", 1, 0.5)]
        assert abs(normalized_log_count(dv, 400, cond) - vol_hat_base(dv, cond)) < 0.05

    def test_body_inclusion_is_equality_at_small_levels(self):
        # the valuation image of a constrained series fills the cut body:
        # counts match the cut-volume prediction already at modest levels
        dv = canonical_divisor([2, 2])
        for mu in (0.25, 0.5):
            cond = [BaseCondition("hyperplane", 1, mu)]
            gaps = [abs(normalized_log_count(dv, n, cond) - vol_hat_base(dv, cond))
                    for n in (50, 100, 200)]
            assert gaps[-1] < 0.1
            assert gaps[-1] <= gaps[0] + 1e-9

    def test_principal_twist_invariant_counts(self):
        dv = canonical_divisor([2, 2])
        tw = principal_twist(dv, [1.0])
        for n in (10, 30):
            assert log_count(tw, n) == pytest.approx(log_count(dv, n), abs=1e-9)

    def test_combined_horizontal_and_vertical_conditions(self):
        # the body cut and the integrand drop apply simultaneously
        dv = canonical_divisor([2, 2])
        conds = [BaseCondition("hyperplane", 1, 0.25), BaseCondition("fiber", 2, 0.25)]
        closed = vol_hat_base(dv, conds)
        assert 0 < closed < vol_hat_base(dv, conds[:1])
        assert closed < vol_hat_base(dv, conds[1:])
        assert abs(normalized_log_count(dv, 200, conds) - closed) < 0.1
