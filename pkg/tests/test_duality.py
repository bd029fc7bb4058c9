"""Reduced cameras, the Cremona involution, the camera/point swap, frame
normalization, and dual fundamental matrices."""

import random
from fractions import Fraction

import pytest

from resect.duality import (
    ReducedConfig,
    bilinear_form_value,
    center,
    cremona,
    cw_swap,
    dual_fundamental,
    is_consistent,
    is_reduced_form,
    normalize_frame,
    reduced_camera,
    reduced_two_focal_system,
    synthesize_reduced,
    two_point_determinant_poly,
)
from resect.exact import QQ, ExactMatrix, determinant, invert, rank
from resect.multipoly import image_ring
from resect.scenes import (
    E1, E2, E3, E4, E5, e1, e2, e3, e4,
    GenericityError,
    project,
    proportional,
    random_arrangement,
    random_camera,
)

# the bilinear form of the stacked 6x6 determinant equals p1^T F p2 with
# this fixed global constant (regression fixture; independent of q1, q2)
DUAL_FUNDAMENTAL_CONSTANT = 1


def rand_proj4(rng, lo=-30, hi=30):
    while True:
        v = tuple(rng.randint(lo, hi) for _ in range(4))
        if any(v):
            return v


def nonzero_coords4(rng, lo=-30, hi=30):
    return tuple(rng.choice([x for x in range(lo, hi) if x != 0]) for _ in range(4))


class TestReducedCamera:
    def test_unit_point(self):
        M = reduced_camera(E5).matrix
        assert M.entries == [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]

    def test_frame_fixing(self):
        rng = random.Random(3)
        for _ in range(20):
            a = nonzero_coords4(rng)
            M = reduced_camera(a).matrix
            for Ei, ei in zip((E1, E2, E3, E4), (e1, e2, e3, e4)):
                assert proportional(M.apply(list(Ei)), ei, QQ)

    def test_degenerate_flag(self):
        rc = reduced_camera((1, 0, 0, 0))
        assert rc.degenerate and rank(rc.matrix) == 1

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            reduced_camera((0, 0, 0, 0))


class TestCremona:
    def test_unit_point(self):
        assert cremona(E5) == (1, 1, 1, -1)

    def test_involution(self):
        rng = random.Random(5)
        for _ in range(100):
            a = nonzero_coords4(rng)
            assert proportional(cremona(cremona(a)), a, QQ)

    def test_two_zeros_rejected(self):
        with pytest.raises(ValueError):
            cremona((1, 1, 0, 0))

    def test_center_is_cremona(self):
        rng = random.Random(7)
        for _ in range(100):
            a = nonzero_coords4(rng)
            assert proportional(center(reduced_camera(a).matrix), cremona(a), QQ)

    def test_center_standard_camera(self):
        A = ExactMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
        assert proportional(center(A), E4, QQ)

    def test_center_rank_deficient_rejected(self):
        with pytest.raises(ValueError):
            center(reduced_camera((1, 0, 0, 0)).matrix)


class TestCwSwap:
    def test_flip_identity_exact(self):
        # the defining identity holds entrywise, not just projectively
        rng = random.Random(11)
        for _ in range(1000):
            a = rand_proj4(rng)
            q = rand_proj4(rng)
            Aa = reduced_camera(a).matrix
            Aq = reduced_camera(q).matrix
            assert Aa.apply(list(q)) == Aq.apply(list(a))

    def test_involutive_and_consistent(self):
        rng = random.Random(13)
        for _ in range(25):
            m, n = rng.choice([(2, 3), (3, 2), (1, 4)])
            a_params = [nonzero_coords4(rng) for _ in range(m)]
            points = [nonzero_coords4(rng) for _ in range(n)]
            cfg = synthesize_reduced(a_params, points)
            assert is_consistent(cfg)
            sw = cw_swap(cfg)
            assert sw.m == n and sw.n == m
            assert is_consistent(sw)
            assert cw_swap(sw) == cfg

    def test_json_roundtrip(self):
        rng = random.Random(17)
        cfg = synthesize_reduced([nonzero_coords4(rng)], [nonzero_coords4(rng)])
        rt = ReducedConfig.from_json_dict(cfg.to_json_dict())
        assert rt == cfg


class TestNormalizeFrame:
    def test_standard_frame_gives_identity(self):
        fn = normalize_frame([E1, E2, E3, E4], [[e1, e2, e3, e4]])
        assert fn.S.entries == ExactMatrix.identity(4).entries
        assert fn.Ts[0].entries == ExactMatrix.identity(3).entries

    def test_random_postconditions(self):
        # construction already verifies S q_k ~ E_k, S E5 ~ E5, T p_k ~ e_k;
        # here we re-check independently on random consistent data
        rng = random.Random(19)
        done = 0
        while done < 25:
            pts = random_arrangement(4, seed=rng.randrange(10**6))
            try:
                cams = [random_camera(rng.randrange(10**6)) for _ in range(2)]
                images = [[project(A, q) for q in pts] for A in cams]
                fn = normalize_frame(pts, images)
            except (GenericityError, ValueError):
                continue
            for k, q in enumerate(pts):
                assert proportional(fn.S.apply(list(q)),
                                    [E1, E2, E3, E4][k], QQ)
            assert proportional(fn.S.apply(list(E5)), E5, QQ)
            for T, image in zip(fn.Ts, images):
                for k, p in enumerate(image):
                    assert proportional(T.apply(list(p)),
                                        [e1, e2, e3, e4][k], QQ)
            done += 1

    def test_coplanar_quadruple_rejected(self):
        world = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 0)]
        with pytest.raises(GenericityError):
            normalize_frame(world, [[e1, e2, e3, e4]])

    def test_normalized_cameras_take_reduced_form(self):
        rng = random.Random(23)
        done = 0
        while done < 10:
            pts = random_arrangement(6, seed=rng.randrange(10**6))
            cams = [random_camera(rng.randrange(10**6)) for _ in range(2)]
            try:
                images4 = [[project(A, q) for q in pts[:4]] for A in cams]
                fn = normalize_frame(pts[:4], images4)
            except (GenericityError, ValueError):
                continue
            Sinv = invert(fn.S)
            for A, T in zip(cams, fn.Ts):
                M = T.matmul(A).matmul(Sinv)
                assert is_reduced_form(M)
            done += 1


class TestDualFundamental:
    def test_zero_diagonal_always(self):
        rng = random.Random(29)
        for _ in range(50):
            F = dual_fundamental(rand_proj4(rng), rand_proj4(rng))
            assert all(F.entries[i][i] == 0 for i in range(3))

    def test_vanishes_on_common_camera_pairs(self):
        rng = random.Random(31)
        for _ in range(100):
            a = nonzero_coords4(rng)
            q1, q2 = rand_proj4(rng), rand_proj4(rng)
            F = dual_fundamental(q1, q2)
            A = reduced_camera(a).matrix
            assert bilinear_form_value(F, A.apply(list(q1)), A.apply(list(q2))) == 0

    def test_rank_at_most_two(self):
        rng = random.Random(37)
        for _ in range(50):
            F = dual_fundamental(rand_proj4(rng), rand_proj4(rng))
            assert determinant(F) == 0

    def test_proportional_to_stacked_determinant(self):
        # coefficient-wise comparison against the 6x6 determinant form;
        # the constant is global (DUAL_FUNDAMENTAL_CONSTANT)
        rng = random.Random(41)
        ring = image_ring(1, 2)
        for _ in range(50):
            q1, q2 = rand_proj4(rng), rand_proj4(rng)
            F = dual_fundamental(q1, q2)
            D = two_point_determinant_poly(q1, q2, ring, 1, 1, 2)
            for a in range(3):
                for b in range(3):
                    exps = [0] * ring.nvars
                    exps[ring.var_index(1, 1, a + 1)] = 1
                    exps[ring.var_index(1, 2, b + 1)] = 1
                    assert D.coeff(tuple(exps)) == \
                        DUAL_FUNDAMENTAL_CONSTANT * F.entries[a][b]

    def test_six_focal_specializes_to_dual_form(self):
        # fixing the reference tetrahedron and its images inside the
        # six-point focal determinant leaves the two-point bilinear form
        from resect.focal import FocalSpec, k_focal_poly

        rng = random.Random(43)
        ring6 = image_ring(1, 6)
        ring2 = image_ring(1, 2)
        spec = FocalSpec(1, tuple(range(1, 7)), ((1, 2, 3),) * 6)
        for _ in range(10):
            q1, q2 = nonzero_coords4(rng), nonzero_coords4(rng)
            arr = [E1, E2, E3, E4, q1, q2]
            f6 = k_focal_poly(arr, spec, ring6)
            subst = {}
            for j, e in zip((1, 2, 3, 4), (e1, e2, e3, e4)):
                for c in (1, 2, 3):
                    subst[ring6.var_index(1, j, c)] = e[c - 1]
            g = f6.substitute(subst)
            vm = {}
            for c in (1, 2, 3):
                vm[ring6.var_index(1, 5, c)] = ring2.var_index(1, 1, c)
                vm[ring6.var_index(1, 6, c)] = ring2.var_index(1, 2, c)
            g2 = g.map_vars(ring2, vm)
            D = two_point_determinant_poly(q1, q2, ring2, 1, 1, 2)
            ratios = set()
            for exps, c in g2.terms.items():
                cd = D.coeff(exps)
                assert cd != 0
                ratios.add(Fraction(c, cd))
            assert len(ratios) == 1 and 0 not in ratios


class TestReducedTwoFocalSystem:
    def test_counts(self):
        rng = random.Random(47)
        pts2 = [nonzero_coords4(rng) for _ in range(2)]
        assert len(reduced_two_focal_system(pts2, 1)) == 1
        pts4 = _generic_cubic_free_points(rng, 4)
        assert len(reduced_two_focal_system(pts4, 3)) == 18

    def test_vanishing_on_consistent_reduced_scenes(self):
        rng = random.Random(53)
        pts = _generic_cubic_free_points(rng, 4)
        m = 2
        a_params = [nonzero_coords4(rng) for _ in range(m)]
        cfg = synthesize_reduced(a_params, pts)
        forms = reduced_two_focal_system(pts, m)
        ring = forms[0].ring
        values = [0] * ring.nvars
        for i in range(m):
            for j in range(len(pts)):
                p = cfg.observations[i][j]
                for c in (1, 2, 3):
                    values[ring.var_index(i + 1, j + 1, c)] = p[c - 1]
        for f in forms:
            assert f.evaluate(values) == 0

    def test_named_genericity_failures(self):
        rng = random.Random(59)
        with pytest.raises(GenericityError, match="tetrahedron vertex"):
            reduced_two_focal_system([E1, (1, 2, 3, 4)], 1)
        q = nonzero_coords4(rng)
        with pytest.raises(GenericityError, match="coincide"):
            reduced_two_focal_system([q, q], 1)
        cubic_pts = [(1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1), (21, 7, 7, -3)]
        with pytest.raises(GenericityError, match="nodal cubic"):
            reduced_two_focal_system(cubic_pts, 1)


def _generic_cubic_free_points(rng, n):
    from resect.scenes import common_nodal_cubic
    from itertools import combinations

    while True:
        pts = [nonzero_coords4(rng) for _ in range(n)]
        try:
            if n < 4 or all(not common_nodal_cubic(list(quad))
                            for quad in combinations(pts, 4)):
                return pts
        except GenericityError:
            continue
