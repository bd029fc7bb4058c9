"""Command-line surface: scene synthesis/validation, focal systems,
duality transforms, ED-degree runs, and Groebner checks, all seeded and
JSON-in/JSON-out.

Exit codes: 0 success (including negative mathematical answers such as
"membership": false), 1 internal error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import duality, focal, scenes
from .eddegree.finitefield import degree_oracle
from .eddegree.formulas import formula_multiview, formula_resectioning
from .eddegree.maps import MultiviewMap, ResectioningMap
from .eddegree.monodromy import MonodromySettings, monodromy_count
from .eddegree.tracker import TrackSettings
from .exact import QQ, field_from_tag
from .multipoly import Budget, grevlex_order, lex_order, s_polynomial, reduce as nf_reduce
from .scenes import GenericityError, Scene

SCHEMA_VERSION = 1


class InputError(Exception):
    pass


def _emit(payload: dict, args) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items()
           if k not in ("func", "out") and v is not None}
    cfg.update(extra)
    return cfg


def _load_scene(path: str) -> Scene:
    try:
        with open(path) as fh:
            return Scene.from_json(fh.read())
    except FileNotFoundError as exc:
        raise InputError(f"scene file not found: {path}") from exc
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"malformed scene file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# scene


def cmd_scene_gen(args):
    field = field_from_tag(args.field)
    scene = scenes.random_scene(args.n, args.m, args.seed, field)
    if args.noise:
        scene = scenes.add_noise(scene, args.noise, args.seed + 1)
    text = scene.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_scene_validate(args):
    scene = _load_scene(args.scene)
    consistent = scenes.verify_consistency(scene)
    report = {
        "config": _config(args),
        "n": scene.n,
        "m": scene.m,
        "field": scene.field.tag,
        "exact": scene.is_exact(),
        "no_four_coplanar": scenes.no_four_coplanar(scene.points, scene.field),
        "consistent": consistent,
    }
    if scene.n >= 4:
        from itertools import combinations
        nodal = False
        try:
            for quad in combinations(scene.points, 4):
                if scenes.common_nodal_cubic(list(quad), scene.field):
                    nodal = True
                    break
            report["four_on_common_nodal_cubic"] = nodal
        except GenericityError:
            report["four_on_common_nodal_cubic"] = None
    _emit(report, args)
    return 0


# ---------------------------------------------------------------------------
# focal


def _scene_from_args(args) -> Scene:
    if getattr(args, "scene", None):
        return _load_scene(args.scene)
    field = field_from_tag(args.field)
    return scenes.random_scene(args.n, getattr(args, "m", 1) or 1, args.seed, field)


def cmd_focal_generate(args):
    scene = _scene_from_args(args)
    system = focal.generators(scene.points, scene.m, scene.field,
                              max_specs=args.max_specs, seed=args.seed)
    payload = {"config": _config(args), **system.to_json_dict()}
    payload["count"] = len(system.entries)
    if not args.full_polys:
        for g in payload["generators"]:
            g["support"] = len(g["poly"]["terms"])
            del g["poly"]
    _emit(payload, args)
    return 0


def cmd_focal_eval(args):
    scene = _scene_from_args(args)
    system = focal.generators(scene.points, scene.m, scene.field,
                              max_specs=args.max_specs, seed=args.seed)
    values = focal.evaluate_system(system, scene.exact_observations())
    F = scene.field
    _emit({
        "config": _config(args),
        "values": [F.to_str(v) for v in values],
        "all_zero": all(F.is_zero(v) for v in values),
    }, args)
    return 0


def cmd_focal_membership(args):
    scene = _scene_from_args(args)
    member = focal.membership(scene.points, scene.exact_observations(), scene.field)
    _emit({"config": _config(args), "membership": member}, args)
    return 0


def cmd_focal_resect(args):
    scene = _scene_from_args(args)
    F = scene.field
    obs = scene.exact_observations()[args.camera - 1]
    A, lambdas = focal.resect_dlt(scene.points, obs, F)
    exact_match = None
    if scene.cameras:
        truth = scene.cameras[args.camera - 1]
        exact_match = focal.verify_camera(scene.points, [
            tuple(truth.apply(list(q))) for q in scene.points
        ], A)
    _emit({
        "config": _config(args),
        "camera": [[F.to_str(x) for x in row] for row in A.entries],
        "lambdas": [F.to_str(x) for x in lambdas],
        "satisfies_projections": focal.verify_camera(scene.points, obs, A, lambdas),
        "matches_ground_truth": exact_match,
    }, args)
    return 0


def cmd_focal_gin(args):
    scene = _scene_from_args(args)
    res = focal.gin_leading(scene.points, args.transform_seed, scene.field)
    _emit({
        "config": _config(args),
        "leading_monomial": str(res.leading),
        "support": res.support,
    }, args)
    return 0


# ---------------------------------------------------------------------------
# duality


def cmd_duality_swap(args):
    with open(args.config) as fh:
        cfg = duality.ReducedConfig.from_json_dict(json.load(fh))
    swapped = duality.cw_swap(cfg)
    text = swapped.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_duality_normalize(args):
    scene = _load_scene(args.scene)
    if scene.n < 4:
        raise InputError("normalization needs at least 4 fiducial points")
    world4 = scene.points[:4]
    obs = scene.exact_observations()
    images4 = [row[:4] for row in obs]
    fn = duality.normalize_frame(world4, images4, scene.field)
    F = scene.field
    _emit({
        "config": _config(args),
        "S": [[F.to_str(x) for x in row] for row in fn.S.entries],
        "T": [[[F.to_str(x) for x in row] for row in T.entries] for T in fn.Ts],
    }, args)
    return 0


def cmd_duality_dualf(args):
    field = field_from_tag(args.field)
    if args.q1:
        q1 = tuple(field.parse(s) for s in args.q1.split(","))
        q2 = tuple(field.parse(s) for s in args.q2.split(","))
    else:
        pts = scenes.random_arrangement(2, args.seed, field)
        q1, q2 = pts[0], pts[1]
    Fm = duality.dual_fundamental(q1, q2, field)
    _emit({
        "config": _config(args),
        "dual_fundamental": [[field.to_str(x) for x in row] for row in Fm.entries],
        "zero_diagonal": all(field.is_zero(Fm.entries[i][i]) for i in range(3)),
    }, args)
    return 0


def cmd_duality_two_focals(args):
    field = field_from_tag(args.field)
    pts = scenes.random_arrangement(args.n, args.seed, field)
    forms = duality.reduced_two_focal_system(pts, args.m, field)
    _emit({
        "config": _config(args),
        "count": len(forms),
        "forms": [f.to_json_dict() for f in forms] if args.full_polys else None,
    }, args)
    return 0


# ---------------------------------------------------------------------------
# ed


def _build_map(args):
    rng = np.random.default_rng(args.data_seed)
    if args.kind == "resect":
        if args.n is None:
            raise InputError("--kind resect requires -n")
        if args.n < 5:
            raise InputError("resectioning runs need n >= 5")
        qbar = rng.standard_normal((args.n, 4))
        return ResectioningMap(qbar), args.n
    if args.kind == "multiview":
        if args.m is None:
            raise InputError("--kind multiview requires -m")
        if args.m < 2:
            raise InputError("multiview runs need m >= 2")
        cams = rng.standard_normal((args.m, 3, 4))
        return MultiviewMap(cams), args.m
    raise InputError(f"unknown kind {args.kind!r}")


def cmd_ed_run(args):
    map_, _ = _build_map(args)
    ts = TrackSettings()
    if args.residual_tol:
        ts.residual_tol = args.residual_tol
    settings = MonodromySettings(stabilize=args.stabilize, track=ts)
    rep = monodromy_count(map_, data_seed=args.data_seed, rng_seed=args.seed,
                          settings=settings)
    _emit({"config": _config(args), **rep.to_json_dict()}, args)
    return 0


def cmd_ed_formula(args):
    if args.kind == "resect":
        if args.n is None:
            raise InputError("--kind resect requires -n")
        value = formula_resectioning(args.n)
        key = "n"
        size = args.n
    else:
        if args.m is None:
            raise InputError("--kind multiview requires -m")
        value = formula_multiview(args.m)
        key = "m"
        size = args.m
    _emit({"config": _config(args), "kind": args.kind, key: size, "ed_degree": value}, args)
    return 0


def cmd_ed_table(args):
    rows = []
    mismatches = []
    for size in range(args.start, args.stop + 1):
        row = {"size": size}
        if size >= 2:
            row["multiview"] = formula_multiview(size)
        if size >= 6:
            row["resectioning"] = formula_resectioning(size)
        if size >= 2 and size <= args.monodromy_max_m:
            rng = np.random.default_rng(args.seed * 97 + size)
            rep = monodromy_count(MultiviewMap(rng.standard_normal((size, 3, 4))),
                                  data_seed=args.seed, rng_seed=args.seed)
            row["multiview_monodromy"] = rep.count
            if rep.count != row["multiview"]:
                mismatches.append({"kind": "multiview", "size": size})
        if size >= 6 and size <= args.monodromy_max_n:
            rng = np.random.default_rng(args.seed * 89 + size)
            rep = monodromy_count(ResectioningMap(rng.standard_normal((size, 4))),
                                  data_seed=args.seed, rng_seed=args.seed)
            row["resectioning_monodromy"] = rep.count
            if rep.count != row["resectioning"]:
                mismatches.append({"kind": "resectioning", "size": size})
        rows.append(row)
    _emit({"config": _config(args), "table": rows, "mismatches": mismatches}, args)
    return 0


# ---------------------------------------------------------------------------
# gb


def cmd_gb_spair_check(args):
    field = field_from_tag(args.field)
    pts = scenes.random_arrangement(args.n, args.seed, field)
    system = focal.generators(pts, 1, field, max_specs=args.max_specs, seed=args.seed)
    entries = [(s, p) for s, p in system.entries
               if args.kmax is None or s.k <= args.kmax]
    polys = [p for _, p in entries]
    ring = system.ring
    order = lex_order(ring) if args.order == "lex" else grevlex_order(ring)
    import random as _random
    rng = _random.Random(args.seed)
    npairs = len(polys) * (len(polys) - 1) // 2
    reduced_to_zero = 0
    checked = 0
    results = []
    target = min(args.samples, npairs)
    seen = set()
    while checked < target:
        i = rng.randrange(len(polys))
        j = rng.randrange(len(polys))
        if i == j:
            continue
        key = (min(i, j), max(i, j))
        if npairs >= target and key in seen:
            continue
        seen.add(key)
        sp = s_polynomial(polys[i], polys[j], order)
        nf = nf_reduce(sp, polys, order)
        checked += 1
        if nf.is_zero():
            reduced_to_zero += 1
        else:
            results.append({"pair": [i, j], "normal_form_terms": nf.num_terms()})
    _emit({
        "config": _config(args),
        "generators": len(polys),
        "kmax": args.kmax,
        "possible_pairs": npairs,
        "checked": checked,
        "reduced_to_zero": reduced_to_zero,
        "all_reduced": reduced_to_zero == checked,
        "nonzero_pairs": results,
    }, args)
    return 0


def cmd_gb_degree68(args):
    budget = Budget(max_pairs=args.max_pairs, max_terms=args.max_terms,
                    max_basis=args.max_basis,
                    wall_seconds=args.budget_minutes * 60.0)
    rep = degree_oracle(seed=args.seed, budget=budget)
    _emit({"config": _config(args), **rep.to_json_dict()}, args)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="resect",
        description="Exact and numerical tools for camera resectioning varieties",
    )
    p.add_argument("--jobs", type=int, default=1,
                   help="worker cap (evaluation is vectorized; outputs are "
                        "independent of this setting)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scene_input=False):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--field", default="QQ", help="QQ or fp:<prime>")
        sp.add_argument("--out", help="write JSON here instead of stdout")
        if scene_input:
            sp.add_argument("--scene", help="scene JSON file (overrides -n/-m/--seed)")
            sp.add_argument("-n", type=int, default=6)
            sp.add_argument("-m", type=int, default=1)

    ps = sub.add_parser("scene", help="generate or validate scenes")
    ssub = ps.add_subparsers(dest="subcommand", required=True)
    g = ssub.add_parser("gen")
    common(g)
    g.add_argument("-n", type=int, required=True)
    g.add_argument("-m", type=int, default=1)
    g.add_argument("--noise", type=float, default=0.0)
    g.set_defaults(func=cmd_scene_gen)
    v = ssub.add_parser("validate")
    common(v)
    v.add_argument("scene")
    v.set_defaults(func=cmd_scene_validate)

    pf = sub.add_parser("focal", help="focal systems, membership, DLT")
    fsub = pf.add_subparsers(dest="subcommand", required=True)
    for name, fn in (("generate", cmd_focal_generate), ("eval", cmd_focal_eval)):
        s = fsub.add_parser(name)
        common(s, scene_input=True)
        s.add_argument("--max-specs", type=int, default=None)
        s.add_argument("--full-polys", action="store_true")
        s.set_defaults(func=fn)
    s = fsub.add_parser("membership")
    common(s, scene_input=True)
    s.set_defaults(func=cmd_focal_membership)
    s = fsub.add_parser("resect")
    common(s, scene_input=True)
    s.add_argument("--camera", type=int, default=1)
    s.set_defaults(func=cmd_focal_resect)
    s = fsub.add_parser("gin")
    common(s, scene_input=True)
    s.add_argument("--transform-seed", type=int, default=None)
    s.set_defaults(func=cmd_focal_gin)

    pd = sub.add_parser("duality", help="reduced-camera duality operations")
    dsub = pd.add_subparsers(dest="subcommand", required=True)
    s = dsub.add_parser("swap")
    common(s)
    s.add_argument("config", help="reduced configuration JSON")
    s.set_defaults(func=cmd_duality_swap)
    s = dsub.add_parser("normalize")
    common(s)
    s.add_argument("scene")
    s.set_defaults(func=cmd_duality_normalize)
    s = dsub.add_parser("dualF")
    common(s)
    s.add_argument("--q1", help="comma-separated 4-vector")
    s.add_argument("--q2", help="comma-separated 4-vector")
    s.set_defaults(func=cmd_duality_dualf)
    s = dsub.add_parser("two-focals")
    common(s)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-m", type=int, required=True)
    s.add_argument("--full-polys", action="store_true")
    s.set_defaults(func=cmd_duality_two_focals)

    pe = sub.add_parser("ed", help="Euclidean distance degrees")
    esub = pe.add_subparsers(dest="subcommand", required=True)
    s = esub.add_parser("run")
    common(s)
    s.add_argument("--kind", choices=["resect", "multiview"], required=True)
    s.add_argument("-n", type=int)
    s.add_argument("-m", type=int)
    s.add_argument("--data-seed", type=int, default=0)
    s.add_argument("--stabilize", type=int, default=5)
    s.add_argument("--residual-tol", type=float, default=None)
    s.set_defaults(func=cmd_ed_run)
    s = esub.add_parser("formula")
    common(s)
    s.add_argument("--kind", choices=["resect", "multiview"], required=True)
    s.add_argument("-n", type=int)
    s.add_argument("-m", type=int)
    s.set_defaults(func=cmd_ed_formula)
    s = esub.add_parser("table")
    common(s)
    s.add_argument("--start", type=int, default=2)
    s.add_argument("--stop", type=int, default=15)
    s.add_argument("--monodromy-max-m", type=int, default=0,
                   help="also verify multiview sizes up to here by monodromy")
    s.add_argument("--monodromy-max-n", type=int, default=0,
                   help="also verify resectioning sizes up to here by monodromy")
    s.set_defaults(func=cmd_ed_table)

    pg = sub.add_parser("gb", help="Groebner-basis checks")
    gsub = pg.add_subparsers(dest="subcommand", required=True)
    s = gsub.add_parser("spair-check")
    common(s)
    s.add_argument("-n", type=int, default=7)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--order", choices=["lex", "grevlex"], default="lex")
    s.add_argument("--max-specs", type=int, default=None)
    s.add_argument("--kmax", type=int, default=None,
                   help="restrict generators to k-focals with k <= kmax "
                        "(e.g. 6 to probe whether the 6-focals suffice)")
    s.set_defaults(func=cmd_gb_spair_check, field="fp:32003")
    s = gsub.add_parser("degree68")
    common(s)
    s.add_argument("--budget-minutes", type=float, default=30.0)
    s.add_argument("--max-pairs", type=int, default=200000)
    s.add_argument("--max-terms", type=int, default=400000)
    s.add_argument("--max-basis", type=int, default=4000)
    s.set_defaults(func=cmd_gb_degree68, field="fp:32003")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GenericityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort internal error path
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
