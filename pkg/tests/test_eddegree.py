"""Parametrizations, critical systems, tracking, and ED-degree formulas.

The headline monodromy reproductions (68 / 360 / 6 / 47) live in the
acceptance suite; this file covers the fast mechanics.
"""

import numpy as np
import pytest

from resect.eddegree import (
    ChartViolationError,
    MultiviewMap,
    PathStatus,
    ResectioningMap,
    TrackSettings,
    build_critical_system,
    formula_multiview,
    formula_resectioning,
    monodromy_count,
    seed_solution,
    track,
)
from resect.eddegree.monodromy import MonodromySettings
from resect.eddegree.tracker import track_batch


@pytest.fixture
def res_map():
    rng = np.random.default_rng(11)
    return ResectioningMap(rng.standard_normal((6, 4)))


@pytest.fixture
def mv_map():
    rng = np.random.default_rng(12)
    return MultiviewMap(rng.standard_normal((3, 3, 4)))


def central_diff_jacobian(fn, x, out_dim, h=1e-6):
    J = np.zeros((out_dim, x.size), dtype=np.complex128)
    for k in range(x.size):
        dx = np.zeros_like(x)
        dx[k] = h
        J[:, k] = (fn(x + dx) - fn(x - dx)) / (2 * h)
    return J


class TestPsi:
    def test_scale_invariance(self, res_map):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        lam = 2.3 - 0.7j
        assert np.allclose(res_map.psi(lam * x), res_map.psi(x), atol=1e-12)

    def test_exact_scene_match(self):
        # psi of a float camera reproduces dehomogenized observations
        from fractions import Fraction

        from resect.scenes import random_scene

        sc = random_scene(6, 1, seed=5)
        q = np.array([[float(x) for x in p] for p in sc.points])
        mp = ResectioningMap(q)
        A = np.array([[float(x) for x in row] for row in sc.cameras[0].entries])
        out = mp.psi(A.reshape(12).astype(np.complex128))
        for j, p in enumerate(sc.observations[0]):
            u = float(Fraction(p[0]) / Fraction(p[2]))
            v = float(Fraction(p[1]) / Fraction(p[2]))
            assert abs(out[2 * j] - u) < 1e-12 * max(1, abs(u))
            assert abs(out[2 * j + 1] - v) < 1e-12 * max(1, abs(v))

    def test_chart_violation(self, res_map):
        x = np.zeros(12, dtype=np.complex128)
        x[0] = 1.0  # third row identically zero
        with pytest.raises(ChartViolationError):
            res_map.psi(x)

    @pytest.mark.parametrize("kind", ["resectioning", "multiview"])
    def test_jacobian_matches_central_differences(self, kind, res_map, mv_map):
        mp = res_map if kind == "resectioning" else mv_map
        rng = np.random.default_rng(17)
        for _ in range(20):
            x = rng.standard_normal(mp.nx) + 1j * rng.standard_normal(mp.nx)
            J = mp.psi_jacobian(x)
            Jfd = central_diff_jacobian(mp.psi, x, mp.nd)
            assert np.abs(J - Jfd).max() / np.abs(J).max() < 1e-6


class TestCriticalSystem:
    def test_square_shapes(self, res_map, mv_map):
        for mp in (res_map, mv_map):
            rng = np.random.default_rng(3)
            d = rng.standard_normal(mp.nd) + 1j * rng.standard_normal(mp.nd)
            sys_ = build_critical_system(mp, d, seed=1)
            X = (rng.standard_normal((4, mp.nx))
                 + 1j * rng.standard_normal((4, mp.nx)))
            assert sys_.F(X).shape == (4, mp.nx)
            assert sys_.J(X).shape == (4, mp.nx, mp.nx)

    def test_dimension_mismatch(self, res_map):
        with pytest.raises(ValueError):
            build_critical_system(res_map, np.zeros(5))

    def test_data_on_variety_solves(self, res_map):
        # d = psi(x0) exactly makes x0 a solution of the gradient system
        rng = np.random.default_rng(5)
        x0 = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        d = res_map.psi(x0)
        sys_ = build_critical_system(res_map, d, seed=2)
        x0 = x0 / (x0 @ sys_.chart)
        resid = sys_.residuals(x0[None, :])[0]
        assert resid < 1e-10

    def test_seed_solution_residual(self, res_map, mv_map):
        for mp in (res_map, mv_map):
            for seed in range(10):
                x0, d0 = seed_solution(mp, seed=seed)
                sys_ = build_critical_system(mp, d0, seed=seed)
                x0 = x0 / (x0 @ sys_.chart)
                assert sys_.residuals(x0[None, :])[0] < 1e-12

    def test_system_jacobian_matches_fd(self, res_map):
        rng = np.random.default_rng(7)
        d = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        sys_ = build_critical_system(res_map, d, seed=3)
        x = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        J = sys_.J(x[None, :])[0]
        Jfd = central_diff_jacobian(lambda y: sys_.F(y[None, :])[0], x, 12)
        assert np.abs(J - Jfd).max() / np.abs(J).max() < 1e-6


class TestTrack:
    def test_zero_length_path(self, res_map):
        x0, d0 = seed_solution(res_map, seed=1)
        sys_ = build_critical_system(res_map, d0, seed=1)
        x0 = x0 / (x0 @ sys_.chart)
        res = track(sys_, x0, d0, d0)
        assert res.status == PathStatus.SUCCESS
        assert np.allclose(res.x, x0)

    def test_loop_returns_to_fiber(self, res_map):
        # a closed triangle loop maps the start solution to a solution of
        # the original system (possibly itself)
        x0, d0 = seed_solution(res_map, seed=2)
        sys_ = build_critical_system(res_map, d0, seed=2)
        x0 = x0 / (x0 @ sys_.chart)
        rng = np.random.default_rng(3)
        scale = float(np.abs(d0).mean())
        d1 = (rng.standard_normal(12) + 1j * rng.standard_normal(12)) * scale
        d2 = (rng.standard_normal(12) + 1j * rng.standard_normal(12)) * scale
        ts = TrackSettings()
        X = x0[None, :]
        for a, b in ((d0, d1), (d1, d2), (d2, d0)):
            gamma = np.exp(1j * rng.uniform(0.3, 6.0))
            X, st, _ = track_batch(sys_, X, a, b, gamma, ts)
            assert st[0] == PathStatus.SUCCESS
        assert sys_.residuals(X)[0] < ts.residual_tol

    def test_tightened_tolerance(self, res_map):
        x0, d0 = seed_solution(res_map, seed=4)
        sys_ = build_critical_system(res_map, d0, seed=4)
        x0 = x0 / (x0 @ sys_.chart)
        rng = np.random.default_rng(5)
        d1 = (rng.standard_normal(12) + 1j * rng.standard_normal(12))
        ts = TrackSettings(residual_tol=1e-10)
        res = track(sys_, x0, d0, d1, settings=ts, rng=rng)
        assert res.status == PathStatus.SUCCESS
        D1 = np.broadcast_to(d1, (1, 12))
        assert sys_.residuals(res.x[None, :], D1)[0] <= 1e-10


class TestFormulas:
    def test_resectioning_values(self):
        expected = {6: 68, 7: 360, 8: 1036, 9: 2256, 10: 4180, 11: 6968,
                    12: 10780, 13: 15776, 14: 22116, 15: 29960}
        for n, v in expected.items():
            assert formula_resectioning(n) == v

    def test_multiview_values(self):
        expected = {2: 6, 3: 47, 4: 148, 5: 336, 6: 638, 7: 1081, 8: 1692,
                    9: 2498, 10: 3526, 11: 4803, 12: 6356, 13: 8212,
                    14: 10398, 15: 12941}
        for m, v in expected.items():
            assert formula_multiview(m) == v

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            formula_resectioning(5)
        with pytest.raises(ValueError):
            formula_multiview(1)


class TestMonodromy:
    def test_n5_trivial_count(self):
        rng = np.random.default_rng(20)
        mp = ResectioningMap(rng.standard_normal((5, 4)))
        rep = monodromy_count(mp, data_seed=0, rng_seed=0)
        assert rep.count == 1
        assert rep.transitive
        assert rep.loops_used == 0
        assert "dominant" in rep.note

    def test_multiview_m2_count_6(self):
        rng = np.random.default_rng(21)
        mv = MultiviewMap(rng.standard_normal((2, 3, 4)))
        rep = monodromy_count(mv, data_seed=1, rng_seed=2)
        assert rep.count == 6
        assert rep.residual_max < 1e-9
        assert rep.stabilized

    def test_report_json(self):
        rng = np.random.default_rng(22)
        mp = ResectioningMap(rng.standard_normal((5, 4)))
        rep = monodromy_count(mp, data_seed=3, rng_seed=4)
        d = rep.to_json_dict()
        assert d["count"] == 1 and d["kind"] == "resectioning" and d["n"] == 5
        assert "tolerances" in d
