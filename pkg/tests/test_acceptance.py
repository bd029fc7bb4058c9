"""Acceptance suite: the package's headline claims, each checked at a
pinned tolerance and wall-clock budget, printing one PASS/FAIL line per
criterion (run with -s to stream them).

The finite-field Groebner oracle is a stretch criterion whose
budget_exceeded outcome is accepted and reported; raise its budget via
RESECT_ORACLE_BUDGET_MINUTES.
"""

import os
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from resect.duality import (
    bilinear_form_value,
    center,
    cremona,
    cw_swap,
    dual_fundamental,
    is_consistent,
    normalize_frame,
    reduced_camera,
    synthesize_reduced,
    two_point_determinant_poly,
)
from resect.eddegree.finitefield import degree_oracle
from resect.eddegree.formulas import formula_multiview, formula_resectioning
from resect.eddegree.maps import MultiviewMap, ResectioningMap
from resect.eddegree.monodromy import monodromy_count
from resect.exact import PrimeField, QQ
from resect.focal import (
    FocalSpec,
    evaluate_system,
    generators,
    gin_leading,
    k_focal_poly,
    membership,
    membership_by_evaluation,
    resect_dlt,
    verify_camera,
)
from resect.multipoly import (
    Budget,
    grevlex_order,
    image_ring,
    lex_order,
    reduce as nf_reduce,
    s_polynomial,
)
from resect.scenes import (
    E1, E2, E3, E4, e1, e2, e3, e4,
    project,
    proportional,
    random_arrangement,
    random_camera,
    random_scene,
)

F32003 = PrimeField(32003)

# monodromy reports produced by criterion 7 and re-checked by criterion 10
_MONODROMY_REPORTS = []


def report(num, ok, desc, detail=""):
    line = f"ACCEPTANCE {num:>2}: {'PASS' if ok else 'FAIL'}  {desc}"
    if detail:
        line += f"  [{detail}]"
    print(line, flush=True)
    assert ok, line


def lex_exps(ring, coords):
    exps = [0] * ring.nvars
    for j, c in enumerate(coords, start=1):
        exps[ring.var_index(1, j, c)] = 1
    return tuple(exps)


def test_criterion_01_hypersurface_structure():
    """20 arrangements: support 90, transformed support 729, pinned lex
    leading monomials; under 60 s."""
    t0 = time.time()
    ring = image_ring(1, 6)
    spec = FocalSpec(1, tuple(range(1, 7)), ((1, 2, 3),) * 6)
    lm_plain = lex_exps(ring, [1, 1, 2, 2, 3, 3])
    lm_generic = lex_exps(ring, [1, 1, 1, 1, 1, 1])
    ok = True
    for trial in range(20):
        pts = random_arrangement(6, seed=10_000 + trial)
        poly = k_focal_poly(pts, spec, ring)
        ok &= poly.num_terms() == 90
        ok &= poly.leading_exps(lex_order(ring)) == lm_plain
        res = gin_leading(pts, seed=20_000 + trial)
        ok &= res.support == 729
        ok &= res.leading.exps == lm_generic
    elapsed = time.time() - t0
    ok &= elapsed < 60
    report(1, ok, "hypersurface support 90 / gin 729 with pinned lex leads",
           f"{elapsed:.1f}s")


def test_criterion_02_vanishing_and_membership():
    """k-focal vanishing on 50 exact scenes (n in 6..10, m in 1..2, sampled
    generator sets above the enumeration budget); rank vs evaluation
    membership agreement on 100 consistent and 100 perturbed scenes;
    five-point membership always true; under 5 min."""
    t0 = time.time()
    ok = True

    # vanishing sweep
    sizes = [(n, m) for n in range(6, 11) for m in (1, 2)]
    for trial in range(50):
        n, m = sizes[trial % len(sizes)]
        sc = random_scene(n, m, seed=30_000 + trial)
        system = generators(sc.points, m, max_specs=240, seed=trial)
        values = evaluate_system(system, sc.observations)
        ok &= all(v == 0 for v in values)

    # membership agreement
    rng = random.Random(31_000)
    for trial in range(100):
        n = 6 + trial % 4
        sc = random_scene(n, 1, seed=32_000 + trial)
        system = generators(sc.points, 1, max_specs=150, seed=trial)
        ok &= membership(sc.points, sc.observations) is True
        ok &= membership_by_evaluation(system, sc.observations) is True
        bad = [list(row) for row in sc.observations]
        j = rng.randrange(n)
        bad[0][j] = tuple(rng.randint(-99, 99) for _ in range(3))
        ok &= membership(sc.points, bad) is False
        ok &= membership_by_evaluation(system, bad) is False

    # five points: everything is a member
    for trial in range(10):
        pts = random_arrangement(5, seed=33_000 + trial)
        grid = [[tuple(rng.randint(-99, 99) for _ in range(3))
                 for _ in range(5)]]
        ok &= membership(pts, grid) is True

    elapsed = time.time() - t0
    ok &= elapsed < 300
    report(2, ok, "k-focal vanishing and membership agreement",
           f"{elapsed:.1f}s")


def test_criterion_03_dlt_exactness():
    """100 rational scenes, n in 6..11: recovered camera exactly
    proportional to ground truth (zero tolerance); under 2 min."""
    t0 = time.time()
    ok = True
    for trial in range(100):
        n = 6 + trial % 6
        pts = random_arrangement(n, seed=40_000 + trial)
        A = random_camera(41_000 + trial)
        obs = [project(A, q) for q in pts]
        R, lambdas = resect_dlt(pts, obs)
        ok &= verify_camera(pts, obs, R, lambdas)
        flat_true = [x for row in A.entries for x in row]
        flat_rec = [x for row in R.entries for x in row]
        ok &= proportional(flat_true, flat_rec, QQ)
    elapsed = time.time() - t0
    ok &= elapsed < 120
    report(3, ok, "DLT recovery exactly proportional on 100 scenes",
           f"{elapsed:.1f}s")


def test_criterion_04_groebner_sampling():
    """(1,7) over F_32003: 200 sampled S-pairs reduce to zero under the
    pinned lex order and one grevlex order, 100% required; under 10 min."""
    t0 = time.time()
    pts = random_arrangement(7, seed=50_001, field=F32003)
    system = generators(pts, 1, F32003)
    polys = system.polynomials()
    ring = system.ring
    rng = random.Random(50_002)
    pairs = set()
    while len(pairs) < 200:
        i, j = rng.sample(range(len(polys)), 2)
        pairs.add((min(i, j), max(i, j)))
    ok = True
    counts = {}
    for name, order in (("lex", lex_order(ring)), ("grevlex", grevlex_order(ring))):
        zero = 0
        for i, j in pairs:
            sp = s_polynomial(polys[i], polys[j], order)
            if nf_reduce(sp, polys, order).is_zero():
                zero += 1
        counts[name] = zero
        ok &= zero == len(pairs)
    elapsed = time.time() - t0
    ok &= elapsed < 600
    report(4, ok, "200/200 S-pairs reduce to zero under lex and grevlex",
           f"lex {counts['lex']}/200, grevlex {counts['grevlex']}/200, {elapsed:.1f}s")


def test_criterion_05_cw_identities():
    """1000 exact flips, 100 center/Cremona checks, swap consistency and
    involution on 100 configs, frame postconditions on 100 inputs; under
    1 min."""
    t0 = time.time()
    rng = random.Random(60_000)
    ok = True

    def nz4():
        return tuple(rng.choice([x for x in range(-30, 31) if x]) for _ in range(4))

    for _ in range(1000):
        a, q = nz4(), nz4()
        ok &= reduced_camera(a).matrix.apply(list(q)) == \
            reduced_camera(q).matrix.apply(list(a))

    for _ in range(100):
        a = nz4()
        ok &= proportional(center(reduced_camera(a).matrix), cremona(a), QQ)
        ok &= proportional(cremona(cremona(a)), a, QQ)

    for _ in range(100):
        m, n = rng.choice([(1, 2), (2, 2), (2, 3), (3, 2)])
        cfg = synthesize_reduced([nz4() for _ in range(m)],
                                 [nz4() for _ in range(n)])
        sw = cw_swap(cfg)
        ok &= is_consistent(sw)
        ok &= cw_swap(sw) == cfg

    done = 0
    while done < 100:
        pts = random_arrangement(4, seed=rng.randrange(10**7))
        try:
            cams = [random_camera(rng.randrange(10**7))]
            images = [[project(A, q) for q in pts] for A in cams]
            fn = normalize_frame(pts, images)
        except ValueError:
            continue
        targets = [E1, E2, E3, E4]
        for k, q in enumerate(pts):
            ok &= proportional(fn.S.apply(list(q)), targets[k], QQ)
        imtargets = [e1, e2, e3, e4]
        for k, p in enumerate(images[0]):
            ok &= proportional(fn.Ts[0].apply(list(p)), imtargets[k], QQ)
        done += 1

    elapsed = time.time() - t0
    ok &= elapsed < 60
    report(5, ok, "Carlsson-Weinshall identities hold exactly", f"{elapsed:.1f}s")


def test_criterion_06_dual_fundamental():
    """Coefficient-wise proportionality (one global constant) between the
    stacked determinant and the dual fundamental form on 50 pairs;
    vanishing on 100 consistent instances; det F = 0; under 1 min."""
    t0 = time.time()
    rng = random.Random(70_000)
    ring = image_ring(1, 2)
    ok = True
    constants = set()
    for _ in range(50):
        q1 = tuple(rng.randint(-40, 40) for _ in range(4))
        q2 = tuple(rng.randint(-40, 40) for _ in range(4))
        if not any(q1) or not any(q2):
            continue
        F = dual_fundamental(q1, q2)
        D = two_point_determinant_poly(q1, q2, ring, 1, 1, 2)
        pair_consts = set()
        for a in range(3):
            for b in range(3):
                exps = [0] * ring.nvars
                exps[ring.var_index(1, 1, a + 1)] = 1
                exps[ring.var_index(1, 2, b + 1)] = 1
                cD = D.coeff(tuple(exps))
                cF = F.entries[a][b]
                if cF == 0:
                    ok &= cD == 0
                else:
                    pair_consts.add(Fraction(cD, cF))
        ok &= len(pair_consts) == 1
        constants |= pair_consts
        from resect.exact import determinant
        ok &= determinant(F) == 0
    ok &= constants == {Fraction(1)}

    for _ in range(100):
        a = tuple(rng.choice([x for x in range(-30, 31) if x]) for _ in range(4))
        q1 = tuple(rng.randint(-30, 30) for _ in range(4))
        q2 = tuple(rng.randint(-30, 30) for _ in range(4))
        if not any(q1) or not any(q2):
            continue
        A = reduced_camera(a).matrix
        p1, p2 = A.apply(list(q1)), A.apply(list(q2))
        ok &= bilinear_form_value(dual_fundamental(q1, q2), p1, p2) == 0

    elapsed = time.time() - t0
    ok &= elapsed < 60
    report(6, ok, "dual fundamental matrix matches the 2-focal determinant",
           f"global constant 1, {elapsed:.1f}s")


def test_criterion_07_ed_degree_monodromy():
    """Monodromy reproduces the ED degrees: 68 at n=6 across 3 data seeds
    x 2 rng seeds (each under 5 min), 360 at n=7 (one seed, under 45 min),
    6 at m=2 and 47 at m=3 (each under 2 min); the n=6 runs must witness
    transitivity."""
    ok = True
    details = []

    for ds in (1, 2, 3):
        q = np.random.default_rng(1000 + ds).standard_normal((6, 4))
        mp = ResectioningMap(q)
        for rs in (1, 2):
            t0 = time.time()
            rep = monodromy_count(mp, data_seed=ds, rng_seed=rs)
            dt = time.time() - t0
            _MONODROMY_REPORTS.append(rep)
            ok &= rep.count == 68
            ok &= rep.transitive
            ok &= dt < 300
            details.append(f"n6[{ds},{rs}]={rep.count}/{dt:.0f}s")

    cams2 = np.random.default_rng(2002).standard_normal((2, 3, 4))
    t0 = time.time()
    rep = monodromy_count(MultiviewMap(cams2), data_seed=1, rng_seed=1)
    dt = time.time() - t0
    _MONODROMY_REPORTS.append(rep)
    ok &= rep.count == 6 and dt < 120
    details.append(f"m2={rep.count}/{dt:.0f}s")

    cams3 = np.random.default_rng(2003).standard_normal((3, 3, 4))
    t0 = time.time()
    rep = monodromy_count(MultiviewMap(cams3), data_seed=1, rng_seed=1)
    dt = time.time() - t0
    _MONODROMY_REPORTS.append(rep)
    ok &= rep.count == 47 and dt < 120
    details.append(f"m3={rep.count}/{dt:.0f}s")

    q7 = np.random.default_rng(1007).standard_normal((7, 4))
    t0 = time.time()
    rep = monodromy_count(ResectioningMap(q7), data_seed=1, rng_seed=1)
    dt = time.time() - t0
    _MONODROMY_REPORTS.append(rep)
    ok &= rep.count == 360 and dt < 2700
    details.append(f"n7={rep.count}/{dt:.0f}s")

    report(7, ok, "monodromy reproduces ED degrees 68/360/6/47",
           ", ".join(details))


def test_criterion_08_formula_consistency():
    """Closed forms reproduce the known degree values exactly."""
    resect_col = {6: 68, 7: 360, 8: 1036, 9: 2256, 10: 4180, 11: 6968,
                  12: 10780, 13: 15776, 14: 22116, 15: 29960}
    mv_col = {2: 6, 3: 47, 4: 148, 5: 336, 6: 638, 7: 1081, 8: 1692,
              9: 2498, 10: 3526, 11: 4803, 12: 6356, 13: 8212,
              14: 10398, 15: 12941}
    ok = all(formula_resectioning(n) == v for n, v in resect_col.items())
    ok &= all(formula_multiview(m) == v for m, v in mv_col.items())
    report(8, ok, "formulas match the table for n=6..15 and m=2..15")


def test_criterion_09_finite_field_oracle_stretch():
    """Stretch: Buchberger + ideal-quotient pipeline over F_32003 on the
    six-point critical ideal; 68 or an honest budget_exceeded."""
    minutes = float(os.environ.get("RESECT_ORACLE_BUDGET_MINUTES", "2"))
    budget = Budget(max_pairs=400_000, max_terms=600_000, max_basis=6000,
                    wall_seconds=minutes * 60.0)
    rep = degree_oracle(seed=3, budget=budget)
    ok = (rep.status == "ok" and rep.count == 68) or rep.status == "budget_exceeded"
    report(9, ok, "finite-field degree oracle (stretch)",
           f"status={rep.status}, count={rep.count}, stage={rep.stage}, "
           f"budget={minutes}min")


def test_criterion_10_numerical_hygiene():
    """psi_jacobian vs central differences at relative 1e-6 on 20 points
    per map kind; every accepted monodromy solution residual < 1e-9."""
    ok = True
    rng = np.random.default_rng(90_000)
    maps = [
        ResectioningMap(rng.standard_normal((6, 4))),
        MultiviewMap(rng.standard_normal((3, 3, 4))),
    ]
    h = 1e-6
    for mp in maps:
        for _ in range(20):
            x = rng.standard_normal(mp.nx) + 1j * rng.standard_normal(mp.nx)
            J = mp.psi_jacobian(x)
            Jfd = np.zeros((mp.nd, mp.nx), dtype=np.complex128)
            for k in range(mp.nx):
                dx = np.zeros(mp.nx, dtype=np.complex128)
                dx[k] = h
                Jfd[:, k] = (mp.psi(x + dx) - mp.psi(x - dx)) / (2 * h)
            ok &= np.abs(J - Jfd).max() / np.abs(J).max() < 1e-6

    reports = _MONODROMY_REPORTS or [
        monodromy_count(MultiviewMap(
            np.random.default_rng(2002).standard_normal((2, 3, 4))),
            data_seed=1, rng_seed=1)
    ]
    worst = max(rep.residual_max for rep in reports)
    ok &= worst < 1e-9
    report(10, ok, "jacobian agreement and monodromy residuals",
           f"worst residual {worst:.2e} over {len(reports)} runs")
