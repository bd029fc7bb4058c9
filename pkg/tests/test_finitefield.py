"""Finite-field critical-ideal pipeline, validated on plane curves whose
smooth-locus critical counts have independent by-hand oracles."""

import pytest

from resect.eddegree.finitefield import (
    critical_ideal,
    degree_oracle,
    hypersurface_chart_poly,
)
from resect.exact import PrimeField
from resect.multipoly import (
    Budget,
    MultiPoly,
    generic_ring,
    grevlex_order,
    ideal_quotient_by_ideal,
    standard_monomial_count,
)
from resect.scenes import random_arrangement


@pytest.fixture
def fp_ring():
    Fp = PrimeField(32003)
    R = generic_ring(["x", "y"], Fp)
    return R, MultiPoly.variable(R, 0), MultiPoly.variable(R, 1)


class TestPlaneCurvePipeline:
    def test_ellipse_count_4(self, fp_ring):
        # distance from a generic point to x^2 + 4y^2 = 1 has 4 critical
        # points (classical)
        R, x, y = fp_ring
        order = grevlex_order(R)
        H = x * x + 4 * y * y - 1
        gens = critical_ideal(H, [7, 11])
        res = ideal_quotient_by_ideal(gens, [H.derivative(0), H.derivative(1)],
                                      order, Budget())
        assert res.completed
        assert standard_monomial_count(res.generators, order) == 4

    def test_circle_count_2(self, fp_ring):
        R, x, y = fp_ring
        order = grevlex_order(R)
        H = x * x + y * y - 1
        gens = critical_ideal(H, [7, 11])
        res = ideal_quotient_by_ideal(gens, [H.derivative(0), H.derivative(1)],
                                      order, Budget())
        assert res.completed
        assert standard_monomial_count(res.generators, order) == 2

    def test_cuspidal_cubic_saturates_to_4(self, fp_ring):
        # oracle: on (t^2, t^3) the critical equation is
        # t^3 (3t^4 + 2t^2 - 3bt - 2a) = 0, so 4 smooth-locus solutions;
        # one quotient leaves cusp multiplicity, iterating saturates
        R, x, y = fp_ring
        order = grevlex_order(R)
        H = y * y - x * x * x
        J = [H.derivative(0), H.derivative(1)]
        cur = critical_ideal(H, [5, 13])
        counts = []
        for _ in range(3):
            res = ideal_quotient_by_ideal(cur, J, order, Budget())
            assert res.completed
            counts.append(standard_monomial_count(res.generators, order))
            cur = res.generators
        assert counts[-1] == counts[-2] == 4


class TestSixPointOracle:
    def test_chart_polynomial_shape(self):
        Fp = PrimeField(32003)
        pts = random_arrangement(6, seed=9, field=Fp)
        H = hypersurface_chart_poly(pts, Fp)
        assert H.ring.nvars == 12
        assert not H.is_zero()
        assert H.total_degree() <= 6
        # critical ideal: 66 minors plus the hypersurface itself
        gens = critical_ideal(H, list(range(1, 13)))
        assert len(gens) == 67

    def test_oracle_reports_budget_honestly(self):
        rep = degree_oracle(seed=1, budget=Budget(max_pairs=30, max_terms=50000,
                                                  max_basis=100,
                                                  wall_seconds=30))
        assert rep.status in ("ok", "budget_exceeded")
        if rep.status == "ok":
            assert rep.count == 68
        else:
            assert rep.count is None
            assert rep.stage
