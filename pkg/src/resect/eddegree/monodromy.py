"""Monodromy solution counting for critical systems.

Starting from one verified seed solution over base data d0, random
triangle loops d0 -> d1 -> d2 -> d0 in complex data space are tracked; the
endpoints of each loop permute (and grow) the registry of known solutions
over d0.  The run stops once no new solution has appeared for a fixed
number of consecutive loops.  The collected permutations are also checked
for transitivity on the final solution set.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

import numpy as np

from .systems import build_critical_system, seed_solution
from .tracker import PathStatus, TrackSettings, track_batch


@dataclass
class MonodromySettings:
    stabilize: int = 5
    max_loops: int = 200
    # extra loops after count stabilization, used only to collect enough
    # permutations to witness transitivity (new solutions still reset the
    # stabilization counter if one appears)
    extra_transitivity_loops: int = 15
    track: TrackSettings = dc_field(default_factory=TrackSettings)


@dataclass
class MonodromyReport:
    kind: str
    size: int                 # n (resectioning) or m (multiview)
    data_seed: int
    rng_seed: int
    count: int
    transitive: bool
    loops_used: int
    stabilized: bool
    failures: Dict[str, int]
    collisions: int
    residual_max: float
    tolerances: Dict[str, float]
    wall_time_s: float
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            ("n" if self.kind == "resectioning" else "m"): self.size,
            "seed": self.rng_seed,
            "data_seed": self.data_seed,
            "rng_seed": self.rng_seed,
            "count": self.count,
            "transitive": self.transitive,
            "loops": self.loops_used,
            "stabilized": self.stabilized,
            "path_failures": self.failures,
            "loop_collisions": self.collisions,
            "residual_max": self.residual_max,
            "tolerances": self.tolerances,
            "wall_time_s": round(self.wall_time_s, 3),
            "note": self.note,
        }


class _DisjointSet:
    def __init__(self):
        self.parent: List[int] = []

    def add(self):
        self.parent.append(len(self.parent))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def n_components(self):
        return len({self.find(i) for i in range(len(self.parent))})


def monodromy_count(map_, data_seed: int = 0, rng_seed: int = 0,
                    settings: Optional[MonodromySettings] = None) -> MonodromyReport:
    """Count critical points of the geometric error by monodromy.

    data_seed fixes the seed pair (x0, d0) and the random square-up;
    rng_seed drives the loops.  For a resectioning map with n <= 5 the
    parametrization is dominant onto the data space, the unique critical
    point is the projection of the data itself, and the count is 1 without
    any tracking.
    """
    settings = settings or MonodromySettings()
    ts = settings.track
    t0 = time.monotonic()
    tolerances = {
        "residual_tol": ts.residual_tol,
        "dedup_tol": ts.dedup_tol,
        "newton_tol": ts.newton_tol,
        "chart_eps": ts.chart_eps,
    }

    if map_.kind == "resectioning" and map_.n <= 5:
        return MonodromyReport(
            kind=map_.kind, size=map_.n, data_seed=data_seed, rng_seed=rng_seed,
            count=1, transitive=True, loops_used=0, stabilized=True,
            failures={}, collisions=0, residual_max=0.0, tolerances=tolerances,
            wall_time_s=time.monotonic() - t0,
            note="parametrization dominant onto the data space; "
                 "the unique critical point is the data projection",
        )

    x0, d0 = seed_solution(map_, seed=data_seed)
    system = build_critical_system(map_, d0, seed=data_seed)
    x0 = x0 / (x0 @ system.chart)
    res0 = system.residuals(x0[None, :])[0]
    if res0 > ts.residual_tol:
        raise RuntimeError(f"seed solution residual {res0:.2e} above tolerance")

    rng = np.random.default_rng(rng_seed)
    size = map_.n if map_.kind == "resectioning" else map_.m
    scale = float(np.abs(d0).mean()) or 1.0

    registry = x0[None, :].copy()
    dsu = _DisjointSet()
    dsu.add()
    failures: Dict[str, int] = {}
    collisions = 0
    residual_max = res0
    stable = 0
    loops = 0
    extra = 0

    while loops < settings.max_loops:
        if stable >= settings.stabilize:
            if dsu.n_components() == 1 or extra >= settings.extra_transitivity_loops:
                break
            extra += 1
        loops += 1
        d1 = _cgauss(rng, d0.shape) * scale
        d2 = _cgauss(rng, d0.shape) * scale
        waypoints = [d0, d1, d2, d0]
        X = registry.copy()
        alive = np.arange(registry.shape[0])
        for leg in range(3):
            gamma = _unit_gamma(rng)
            X, st, _ = track_batch(system, X, waypoints[leg], waypoints[leg + 1],
                                   gamma, ts)
            good = st == PathStatus.SUCCESS
            for s in st[~good]:
                failures[s.value] = failures.get(s.value, 0) + 1
            X = X[good]
            alive = alive[good]
            if X.shape[0] == 0:
                break

        new_found = 0
        perm_edges = []
        if X.shape[0]:
            res = system.residuals(X)
            residual_max = max(residual_max, float(res.max()))
            dist = np.abs(X[:, None, :] - registry[None, :, :]).max(axis=2)
            match = dist.argmin(axis=1)
            matched_dist = dist[np.arange(X.shape[0]), match]
            hit = matched_dist < ts.dedup_tol
            # permutation edges for surviving paths
            targets = {}
            for src, tgt, ok in zip(alive, match, hit):
                if ok:
                    if tgt in targets:
                        collisions += 1
                    targets[int(tgt)] = int(src)
                    perm_edges.append((int(src), int(tgt)))
            # genuinely new endpoints join the registry
            for row, ok in zip(X, hit):
                if ok:
                    continue
                d_new = np.abs(row[None, :] - registry).max(axis=1)
                if d_new.min() >= ts.dedup_tol:
                    registry = np.vstack([registry, row[None, :]])
                    dsu.add()
                    new_found += 1
        for a, b in perm_edges:
            dsu.union(a, b)

        stable = 0 if new_found else stable + 1

    transitive = dsu.n_components() == 1 and registry.shape[0] > 0
    return MonodromyReport(
        kind=map_.kind, size=size, data_seed=data_seed, rng_seed=rng_seed,
        count=registry.shape[0], transitive=transitive, loops_used=loops,
        stabilized=stable >= settings.stabilize, failures=failures,
        collisions=collisions, residual_max=float(residual_max),
        tolerances=tolerances, wall_time_s=time.monotonic() - t0,
    )


def _cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _unit_gamma(rng):
    theta = rng.uniform(0.15, 2 * np.pi - 0.15)
    return complex(np.cos(theta), np.sin(theta))
