"""Convex kernel: hulls, conjugation, minorants, quadrature, slice predicate."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from arithvol.convexcore import (GridConvexFunction, Region, conjugate_value,
                                 constrained_convex_minorant, convex_hull,
                                 full_region, grid_function_from_callable,
                                 integrate_positive_part, legendre_conjugate,
                                 shifted_simplex, sliced_interior_nonempty,
                                 sliced_interior_witness)
from arithvol.errors import (InfeasibleError, InputError,
                             UnboundedSupremumError)
from conftest import random_full_dim_polytope


def logistic_grid(a0=1.0, a1=1.0, s_range=40.0, n=2001):
    fun = lambda s: np.logaddexp(math.log(a0), math.log(a1) + s)
    return grid_function_from_callable(fun, -s_range, s_range, n, [(0.0, 1.0)])


# ---------------------------------------------------------------------------
# hulls
# ---------------------------------------------------------------------------

class TestConvexHull:
    def test_segment(self):
        p = convex_hull([[0.0], [1.0]])
        assert p.vertices.ravel().tolist() == [0.0, 1.0]
        assert p.volume() == 1.0

    def test_interior_point_absorbed(self):
        p = convex_hull([[0, 0], [1, 0], [0, 1], [0.25, 0.25]])
        assert len(p.vertices) == 3
        assert not any(np.allclose(v, [0.25, 0.25]) for v in p.vertices)

    def test_semigroup_hull_is_simplex(self):
        # oracle: enumerate the normalized monomial valuations for m <= 3
        pts = []
        for m in range(1, 4):
            for i in range(m + 1):
                for j in range(m + 1 - i):
                    pts.append((i / m, j / m))
        p = convex_hull(np.array(pts))
        expected = convex_hull([[0, 0], [1, 0], [0, 1]])
        assert np.allclose(p.vertices, expected.vertices)

    def test_idempotent(self, rng):
        for _ in range(20):
            p = random_full_dim_polytope(rng, 2)
            again = convex_hull(p.vertices)
            assert np.allclose(p.vertices, again.vertices)
            assert p.check_consistency()

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            convex_hull([[0, 1], [1]])

    def test_empty(self):
        with pytest.raises(InputError):
            convex_hull(np.zeros((0, 2)))

    def test_degenerate_collinear(self):
        p = convex_hull([[0, 0], [1, 1], [2, 2]])
        assert not p.is_full_dimensional()
        assert p.volume() == 0.0
        assert p.contains([1.5, 1.5])
        assert not p.contains([1.0, 1.2])

    def test_shifted_simplex(self):
        p = shifted_simplex([1.0, 0.0, 0.0])
        assert p.volume() == pytest.approx(0.5)
        assert p.contains([0.3, 0.3])
        assert not p.contains([0.7, 0.7])


# ---------------------------------------------------------------------------
# Legendre conjugation
# ---------------------------------------------------------------------------

class TestLegendreConjugate:
    def test_linear_conjugate_zero_at_slope(self):
        lam = 0.7
        u = grid_function_from_callable(lambda s: lam * s, -40, 40, 2001, [(lam, lam)])
        assert conjugate_value(u, lam) == pytest.approx(0.0, abs=1e-12)

    def test_linear_conjugate_unbounded_off_slope(self):
        lam = 0.7
        u = grid_function_from_callable(lambda s: lam * s, -40, 40, 2001, [(lam, lam)])
        with pytest.raises(UnboundedSupremumError):
            conjugate_value(u, 0.9)
        with pytest.raises(UnboundedSupremumError):
            legendre_conjugate(u, convex_hull([[0.2], [0.9]]))

    def test_logistic_value_vs_bisection_oracle(self):
        # oracle: maximize x s - u(s) by bisection on the derivative
        a0, a1, x = 1.0, 1.0, 0.5
        du = lambda s: a1 * math.exp(s) / (a0 + a1 * math.exp(s)) - x
        s_star = brentq(du, -50, 50, xtol=1e-14)
        expected = x * s_star - math.log(a0 + a1 * math.exp(s_star))
        assert expected == pytest.approx(-math.log(2), abs=1e-12)
        u = logistic_grid(a0, a1)
        assert conjugate_value(u, x) == pytest.approx(expected, abs=1e-8)

    def test_biconjugation(self):
        # involutive to 1e-6 on slope windows with margin from the recession ends
        u = logistic_grid()
        dom = convex_hull([[0.05], [0.95]])
        star = legendre_conjugate(u, dom)
        assert star.check_convex()
        s_window = convex_hull([[math.log(0.05 / 0.95)], [math.log(0.95 / 0.05)]])
        back = legendre_conjugate(star, s_window)
        truth = np.logaddexp(0.0, back.axes[0])
        assert np.max(np.abs(back.values - truth)) < 1e-6

    def test_biconjugation_quadratic_2d(self):
        fun = lambda s1, s2: 0.5 * (s1 ** 2 + s2 ** 2) + 0.2 * s1 * s2
        u = grid_function_from_callable(fun, [-6, -6], [6, 6], [257, 257],
                                        [(-7.2, 7.2), (-7.2, 7.2)])
        dom = convex_hull([[-3, -3], [3, -3], [-3, 3], [3, 3]])
        star = legendre_conjugate(u, dom)
        s_window = convex_hull([[-2, -2], [2, -2], [-2, 2], [2, 2]])
        back = legendre_conjugate(star, s_window)
        g1, g2 = np.meshgrid(back.axes[0], back.axes[1], indexing="ij")
        assert np.max(np.abs(back.values - fun(g1, g2))) < 1e-6

    def test_order_reversal(self, rng):
        dom = convex_hull([[0.0], [1.0]])
        for _ in range(10):
            c = float(rng.uniform(0.0, 1.0))
            u = logistic_grid()
            v = GridConvexFunction(axes=u.axes, values=u.values + c, recession=u.recession)
            cu = legendre_conjugate(u, dom)
            cv = legendre_conjugate(v, dom)
            assert np.all(cu.values >= cv.values - 1e-12)

    def test_rejects_nonconvex(self):
        s = np.linspace(-1, 1, 101)
        u = GridConvexFunction(axes=(s,), values=-s ** 2, recession=((-2, 2),))
        with pytest.raises(InputError):
            legendre_conjugate(u, convex_hull([[0.0], [0.1]]))


# ---------------------------------------------------------------------------
# constrained convex minorant
# ---------------------------------------------------------------------------

class TestConstrainedMinorant:
    def test_identity_when_feasible(self):
        u = logistic_grid(2.0, 2.0)
        h = constrained_convex_minorant(u, 0.0, 1.0)
        assert np.max(np.abs(h.values - u.values)) < 1e-9

    def test_abs_value_slope_window(self):
        # oracle: restrict the conjugate of |s| (indicator of [-1, 1]) to [0, 1]
        s = np.linspace(-40, 40, 2001)
        u = GridConvexFunction(axes=(s,), values=np.abs(s), recession=((-1.0, 1.0),))
        h = constrained_convex_minorant(u, 0.0, 1.0)
        assert np.max(np.abs(h.values - np.maximum(s, 0.0))) < 1e-12

    def test_barrier_already_satisfied(self):
        s = np.linspace(-40, 40, 2001)
        u = grid_function_from_callable(lambda t: np.logaddexp(math.log(2), math.log(2) + t),
                                        -40, 40, 2001, [(0.0, 1.0)])
        barrier = GridConvexFunction(axes=(s,), values=np.maximum(s, 0.0), recession=((0.0, 1.0),))
        h = constrained_convex_minorant(u, 0.0, 1.0, barrier=barrier)
        assert np.max(np.abs(h.values - u.values)) < 1e-9

    def test_barrier_forces_lift(self):
        # u below the barrier near -inf: the fixed point sticks to the barrier there
        s = np.linspace(-40, 40, 2001)
        u = grid_function_from_callable(lambda t: np.logaddexp(math.log(0.25), math.log(2) + t),
                                        -40, 40, 2001, [(0.0, 1.0)])
        lo = 0.1   # below the left root of the transform: barrier exceeds u somewhere
        barrier = GridConvexFunction(axes=(s,), values=np.maximum(lo * s, s),
                                     recession=((lo, 1.0),))
        with pytest.raises(InfeasibleError) as err:
            constrained_convex_minorant(u, lo, 1.0, barrier=barrier)
        assert err.value.witness is not None

    def test_infeasible_slope_window(self):
        u = logistic_grid()
        with pytest.raises(InputError):
            constrained_convex_minorant(u, 0.5, 0.2)
        with pytest.raises(InfeasibleError):
            constrained_convex_minorant(u, 1.2, 1.5)

    def test_result_is_minorant_and_convex(self, rng):
        u = logistic_grid(0.7, 1.3)
        for lo, hi in ((0.1, 0.9), (0.2, 0.6), (0.0, 0.4)):
            h = constrained_convex_minorant(u, lo, hi)
            assert np.all(h.values <= u.values + 1e-12)
            assert h.check_convex()
            slopes = np.diff(h.values) / (u.axes[0][1] - u.axes[0][0])
            assert slopes.min() >= lo - 1e-9
            assert slopes.max() <= hi + 1e-9


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

ENTROPY_QUARTER = 0.25                       # integral of -(x log x + (1-x)log(1-x))/2
ENTROPY_22 = 0.5 * math.log(2) + 0.25        # shifted by log(2)/2


def entropy(x):
    x = np.clip(x, 0.0, 1.0)
    val = 0.0
    if 0 < x < 1:
        val = -0.5 * (x * math.log(x) + (1 - x) * math.log(1 - x))
    return val


class TestQuadrature:
    def test_zero(self):
        region = full_region(convex_hull([[0.0], [1.0]]))
        assert integrate_positive_part(lambda x: 0.0, region) == 0.0

    def test_entropy_quarter(self):
        # oracle: closed-form antiderivative of x log x
        closed = -2 * (-0.25) / 2   # int_0^1 -x log x dx = 1/4, both terms symmetric
        assert closed == ENTROPY_QUARTER
        region = full_region(convex_hull([[0.0], [1.0]]))
        val = integrate_positive_part(entropy, region)
        assert val == pytest.approx(ENTROPY_QUARTER, abs=1e-8)

    def test_entropy_shifted(self):
        f = lambda x: entropy(x) + 0.5 * math.log(2)
        region = full_region(convex_hull([[0.0], [1.0]]))
        val = integrate_positive_part(f, region)
        assert val == pytest.approx(ENTROPY_22, abs=1e-8)

    def test_empty_region(self):
        region = Region(base=convex_hull([[0.0], [1.0]]),
                        constraints=((np.array([1.0]), -0.5),))
        assert integrate_positive_part(lambda x: 1.0, region) == 0.0

    def test_monotone_in_region(self):
        base = convex_hull([[0.0], [1.0]])
        f = lambda x: entropy(x) - 0.05
        cuts = [0.9, 0.7, 0.5, 0.3]
        vals = []
        for c in cuts:
            region = Region(base=base, constraints=((np.array([1.0]), c),))
            vals.append(integrate_positive_part(f, region))
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_2d_entropy(self):
        # closed form: 6 * integral over the simplex = 1.5 log 2 + 1.25 for weights (1,2,4)
        def g(xy):
            x1, x2 = xy
            x0 = 1.0 - x1 - x2
            total = 0.0
            for v, a in ((x0, 1.0), (x1, 2.0), (x2, 4.0)):
                if v > 1e-300:
                    total += v * math.log(a / v)
            return 0.5 * total
        region = full_region(shifted_simplex([1.0, 0.0, 0.0]))
        val = 6 * integrate_positive_part(g, region)
        assert val == pytest.approx(1.5 * math.log(2) + 1.25, abs=1e-6)

    def test_grid_refinement_stability(self):
        region = full_region(convex_hull([[0.0], [1.0]]))
        v1 = integrate_positive_part(entropy, region, rel_tol=1e-9)
        v2 = integrate_positive_part(entropy, region, rel_tol=1e-11)
        assert abs(v1 - v2) < 1e-6


# ---------------------------------------------------------------------------
# slice predicate
# ---------------------------------------------------------------------------

class TestSlicedInterior:
    def test_unit_square(self):
        sq = convex_hull([[0, 0], [1, 0], [0, 1], [1, 1]])
        assert sliced_interior_nonempty(sq, 0.5)
        assert not sliced_interior_nonempty(sq, 0.0)

    def test_random_polytopes_match_direct_search(self, rng):
        hits = 0
        for _ in range(100):
            p = random_full_dim_polytope(rng, int(rng.integers(2, 4)))
            xmin = p.vertices[:, 0].min()
            xmax = p.vertices[:, 0].max()
            a = float(rng.uniform(xmin, xmax)) if rng.uniform() < 0.8 else float(xmin - 0.1)
            got, witness = sliced_interior_witness(p, a)
            _, cheb_r = p.interior_point()
            expected = (cheb_r > 1e-9) and (xmin < a - 1e-12)
            assert got == expected
            if got:
                hits += 1
                assert witness is not None
                assert p.contains(witness)
                assert witness[0] < a
        assert hits > 50

    def test_nonempty_slices_have_interior(self, rng):
        # nonempty slices of full-dimensional bodies always have interior
        for _ in range(100):
            p = random_full_dim_polytope(rng, 2)
            xmin = p.vertices[:, 0].min()
            xmax = p.vertices[:, 0].max()
            a = float(rng.uniform(xmin + 1e-6, xmax))
            ok, witness = sliced_interior_witness(p, a)
            assert ok and witness is not None
