"""World points, cameras, observations: synthesis, genericity predicates,
and persistence.

Points are homogeneous 4-vectors, image points homogeneous 3-vectors,
cameras 3x4 matrices, all over an exact field and considered up to scale.
A :class:`Scene` bundles an arrangement with cameras and their exact (or
noise-perturbed floating) observations.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .exact import ExactMatrix, Field, QQ, PrimeField, determinant, field_from_tag, rank

# Standard projective frame: reference tetrahedron plus unit points.
E1 = (1, 0, 0, 0)
E2 = (0, 1, 0, 0)
E3 = (0, 0, 1, 0)
E4 = (0, 0, 0, 1)
E5 = (1, 1, 1, 1)
e1 = (1, 0, 0)
e2 = (0, 1, 0)
e3 = (0, 0, 1)
e4 = (1, 1, 1)

COORD_RANGE = 10**4  # uniform integer coordinate range for rational sampling


class GenericityError(ValueError):
    """A sampled or supplied configuration violates a named predicate."""


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int


@dataclass
class Scene:
    """A camera/point arrangement with observations.

    ``observations[i][j]`` is the image of point j in camera i.  When
    ``noise`` is None the observations are exact field elements and satisfy
    cameras[i] @ points[j] ~ observations[i][j] exactly; otherwise they
    are floats in the affine chart p[3] = 1.
    """

    field: Field
    points: List[Tuple]
    cameras: List[ExactMatrix]
    observations: List[List[Tuple]]
    seed: Optional[int] = None
    noise: Optional[NoiseSpec] = None

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.cameras)

    def is_exact(self) -> bool:
        return self.noise is None

    def exact_observations(self):
        """Observations lifted to the field (floats become exact binary
        rationals); noisy grids will generically fail membership tests."""
        if self.is_exact():
            return self.observations
        if isinstance(self.field, PrimeField):
            raise ValueError("noisy scenes are only supported over QQ")
        return [
            [tuple(Fraction(x) for x in p) for p in row] for row in self.observations
        ]

    def to_json_dict(self) -> dict:
        F = self.field
        if self.is_exact():
            obs = [[[F.to_str(x) for x in p] for p in row] for row in self.observations]
        else:
            obs = [[[repr(float(x)) for x in p] for p in row] for row in self.observations]
        return {
            "field": F.tag,
            "points": [[F.to_str(x) for x in q] for q in self.points],
            "cameras": [[F.to_str(x) for row in A.entries for x in row] for A in self.cameras],
            "observations": obs,
            "seed": self.seed,
            "noise": {"sigma": self.noise.sigma, "seed": self.noise.seed} if self.noise else None,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Scene":
        F = field_from_tag(data["field"])
        points = [tuple(F.parse(s) for s in q) for q in data["points"]]
        cameras = [
            ExactMatrix([[F.parse(flat[4 * r + c]) for c in range(4)] for r in range(3)], F)
            for flat in data["cameras"]
        ]
        noise = data.get("noise")
        if noise is None:
            obs = [[tuple(F.parse(s) for s in p) for p in row] for row in data["observations"]]
            spec = None
        else:
            obs = [[tuple(float(s) for s in p) for p in row] for row in data["observations"]]
            spec = NoiseSpec(float(noise["sigma"]), int(noise["seed"]))
        return cls(F, points, cameras, obs, data.get("seed"), spec)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ": "), indent=1) + "\n"

    @classmethod
    def from_json(cls, s: str) -> "Scene":
        return cls.from_json_dict(json.loads(s))


# ---------------------------------------------------------------------------
# Predicates


def no_four_coplanar(points: Sequence[Tuple], field: Field = QQ) -> bool:
    """True iff every 4-subset spans P^3 (nonzero 4x4 determinant)."""
    for quad in combinations(points, 4):
        M = ExactMatrix([list(q) for q in quad], field)
        if field.is_zero(determinant(M)):
            return False
    return True


def common_nodal_cubic(points: Sequence[Tuple], field: Field = QQ) -> bool:
    """Do four points lie on a common 4-nodal cubic surface through the
    reference tetrahedron?

    The cubic family a1*x2*x3*x4 + a2*x1*x3*x4 + a3*x1*x2*x4 + a4*x1*x2*x3
    (degenerate members with some a_i = 0 included) gives one linear
    condition per point; the four points lie on a common member iff the
    4x4 coefficient matrix is singular.

    Raises GenericityError if any input equals a tetrahedron vertex.
    """
    pts = list(points)
    if len(pts) != 4:
        raise ValueError("exactly four points required")
    for q in pts:
        if _proportional(q, E1, field) or _proportional(q, E2, field) or \
           _proportional(q, E3, field) or _proportional(q, E4, field):
            raise GenericityError("point coincides with a reference tetrahedron vertex")
    rows = []
    for q in pts:
        x1, x2, x3, x4 = q
        F = field
        rows.append([
            F.mul(F.mul(x2, x3), x4),
            F.mul(F.mul(x1, x3), x4),
            F.mul(F.mul(x1, x2), x4),
            F.mul(F.mul(x1, x2), x3),
        ])
    return field.is_zero(determinant(ExactMatrix(rows, field)))


def _proportional(u: Sequence, v: Sequence, field: Field) -> bool:
    """Projective equality: all 2x2 minors of [u|v] vanish."""
    n = len(u)
    for a in range(n):
        for b in range(a + 1, n):
            lhs = field.mul(u[a], v[b])
            rhs = field.mul(u[b], v[a])
            if not field.is_zero(field.sub(lhs, rhs)):
                return False
    return True


proportional = _proportional


# ---------------------------------------------------------------------------
# Sampling


def _random_field_element(rng: random.Random, field: Field):
    if isinstance(field, PrimeField):
        return rng.randrange(field.p)
    return rng.randint(-COORD_RANGE, COORD_RANGE)


def _random_vector(rng: random.Random, field: Field, length: int):
    while True:
        v = tuple(_random_field_element(rng, field) for _ in range(length))
        if any(not field.is_zero(x) for x in v):
            return v


def random_arrangement(n: int, seed: int, field: Field = QQ,
                       max_tries: int = 200) -> List[Tuple]:
    """n world points, deterministic in seed, with no four coplanar.

    Raises GenericityError when the field is too small to satisfy the
    predicate within max_tries resamples.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        pts = [_random_vector(rng, field, 4) for _ in range(n)]
        if n < 4 or no_four_coplanar(pts, field):
            return pts
    raise GenericityError(
        f"could not sample {n} points with no four coplanar over {field.tag}"
    )


def random_camera(seed: int, field: Field = QQ, max_tries: int = 200) -> ExactMatrix:
    """A random full-rank 3x4 camera, deterministic in seed."""
    rng = random.Random(seed)
    for _ in range(max_tries):
        A = ExactMatrix([[_random_field_element(rng, field) for _ in range(4)]
                         for _ in range(3)], field)
        if rank(A) == 3:
            return A
    raise GenericityError(f"could not sample a full-rank camera over {field.tag}")


def random_cameras(m: int, seed: int, field: Field = QQ) -> List[ExactMatrix]:
    return [random_camera(seed * 1000003 + i, field) for i in range(m)]


# ---------------------------------------------------------------------------
# Image formation


def project(A: ExactMatrix, q: Sequence) -> Tuple:
    """The homogeneous image point A q; error when q is the camera center."""
    p = A.apply(list(q))
    if all(A.field.is_zero(x) for x in p):
        raise ValueError("point is the camera center (A q = 0)")
    return tuple(p)


def synthesize(points: Sequence[Tuple], cameras: Sequence[ExactMatrix],
               field: Field = QQ, seed: Optional[int] = None) -> Scene:
    """An exact scene: observations are the exact projections."""
    obs = []
    for A in cameras:
        row = []
        for q in points:
            row.append(project(A, q))
        obs.append(row)
    return Scene(field, [tuple(q) for q in points], list(cameras), obs, seed, None)


def random_scene(n: int, m: int, seed: int, field: Field = QQ) -> Scene:
    """Arrangement + cameras + exact observations, deterministic in seed."""
    pts = random_arrangement(n, seed, field)
    cams = random_cameras(m, seed + 777, field)
    return synthesize(pts, cams, field, seed=seed)


def add_noise(scene: Scene, sigma: float, seed: int) -> Scene:
    """Gaussian pixel noise in the affine chart p[3] = 1.

    Observations are dehomogenized to (u, v, 1) and the u, v coordinates
    perturbed by N(0, sigma^2) noise, deterministically in seed.  With
    sigma = 0 the dehomogenized observations are returned unchanged.
    """
    if not scene.is_exact():
        raise ValueError("scene is already noisy")
    rng = random.Random(seed)
    F = scene.field
    if isinstance(F, PrimeField):
        raise ValueError("noise requires a rational scene")
    obs = []
    for row in scene.observations:
        orow = []
        for p in row:
            w = p[2]
            if F.is_zero(w):
                raise ValueError("observation is at infinity in the p[3]=1 chart")
            u = float(Fraction(p[0]) / Fraction(w))
            v = float(Fraction(p[1]) / Fraction(w))
            if sigma:
                u += rng.gauss(0.0, sigma)
                v += rng.gauss(0.0, sigma)
            orow.append((u, v, 1.0))
        obs.append(orow)
    return Scene(F, scene.points, scene.cameras, obs, scene.seed,
                 NoiseSpec(float(sigma), seed))


def verify_consistency(scene: Scene) -> bool:
    """Exact check of A_i q_j ~ p_{ij} for every observation."""
    obs = scene.exact_observations()
    for i, A in enumerate(scene.cameras):
        for j, q in enumerate(scene.points):
            if not _proportional(project(A, q), obs[i][j], scene.field):
                return False
    return True
