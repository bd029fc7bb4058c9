"""Carlsson-Weinshall duality: reduced cameras, the Cremona involution,
the camera/point swap, frame normalization, dual fundamental matrices, and
the reduced bilinear focal system.

A reduced camera is the 3x4 matrix

    A(a) = [ a1  0   0  a4
             0   a2  0  a4
             0   0  a3  a4 ]

fixing the reference tetrahedron (A(a) E_i ~ e_i); its center is the
Cremona image [1/a1 : 1/a2 : 1/a3 : -1/a4].  The duality itself is the
exact matrix identity A(a) q = A(q) a.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import List, NamedTuple, Sequence, Tuple

from .exact import (
    ExactMatrix,
    Field,
    QQ,
    determinant,
    field_from_tag,
    invert,
    kernel_basis,
    rank,
)
from .multipoly import MultiPoly, PolyRing, image_ring
from .scenes import (
    E1, E2, E3, E4, E5, e1, e2, e3, e4,
    GenericityError,
    common_nodal_cubic,
    proportional,
)


class ReducedCamera(NamedTuple):
    matrix: ExactMatrix
    degenerate: bool


def reduced_camera(a: Sequence, field: Field = QQ) -> ReducedCamera:
    """The reduced camera matrix of a nonzero parameter 4-vector, with a
    degeneracy flag when its rank drops below 3."""
    if all(field.is_zero(x) for x in a):
        raise ValueError("zero parameter vector")
    z = field.zero()
    a1, a2, a3, a4 = a
    M = ExactMatrix([[a1, z, z, a4], [z, a2, z, a4], [z, z, a3, a4]], field)
    return ReducedCamera(M, rank(M) < 3)


def cremona(a: Sequence, field: Field = QQ) -> Tuple:
    """The quadratic Cremona involution [1/a1 : 1/a2 : 1/a3 : -1/a4],
    cleared to polynomial form.  Defined when at most one coordinate is 0."""
    zeros = sum(1 for x in a if field.is_zero(x))
    if zeros >= 2:
        raise ValueError("Cremona involution undefined: two or more zero coordinates")
    a1, a2, a3, a4 = a
    m = field.mul
    return (
        m(m(a2, a3), a4),
        m(m(a1, a3), a4),
        m(m(a1, a2), a4),
        field.neg(m(m(a1, a2), a3)),
    )


def center(A: ExactMatrix) -> Tuple:
    """The camera center: the kernel generator of a full-rank 3x4 matrix."""
    basis = kernel_basis(A)
    if len(basis) != 1:
        raise ValueError("camera is rank-deficient")
    return tuple(basis[0])


# ---------------------------------------------------------------------------
# Reduced configurations and the swap


@dataclass
class ReducedConfig:
    """Camera parameters, world points, and an m x n observation grid."""

    field: Field
    a_params: List[Tuple]
    points: List[Tuple]
    observations: List[List[Tuple]]

    @property
    def m(self) -> int:
        return len(self.a_params)

    @property
    def n(self) -> int:
        return len(self.points)

    def to_json_dict(self) -> dict:
        F = self.field
        return {
            "reduced": True,
            "field": F.tag,
            "cameras": [[F.to_str(x) for x in a] for a in self.a_params],
            "points": [[F.to_str(x) for x in q] for q in self.points],
            "observations": [
                [[F.to_str(x) for x in p] for p in row] for row in self.observations
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ReducedConfig":
        F = field_from_tag(data["field"])
        return cls(
            F,
            [tuple(F.parse(s) for s in a) for a in data["cameras"]],
            [tuple(F.parse(s) for s in q) for q in data["points"]],
            [[tuple(F.parse(s) for s in p) for p in row] for row in data["observations"]],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=1) + "\n"


def synthesize_reduced(a_params: Sequence[Tuple], points: Sequence[Tuple],
                       field: Field = QQ) -> ReducedConfig:
    """Exact reduced configuration: observations A(a_i) q_j."""
    obs = []
    for a in a_params:
        cam = reduced_camera(a, field).matrix
        row = []
        for q in points:
            p = cam.apply(list(q))
            if all(field.is_zero(x) for x in p):
                raise ValueError("point is the camera center")
            row.append(tuple(p))
        obs.append(row)
    return ReducedConfig(field, [tuple(a) for a in a_params],
                         [tuple(q) for q in points], obs)


def cw_swap(cfg: ReducedConfig) -> ReducedConfig:
    """Swap camera parameters and world points, transposing the grid.

    An involution; consistency is preserved exactly by A(a) q = A(q) a.
    """
    obs_t = [
        [cfg.observations[i][j] for i in range(cfg.m)] for j in range(cfg.n)
    ]
    return ReducedConfig(cfg.field, list(cfg.points), list(cfg.a_params), obs_t)


def is_consistent(cfg: ReducedConfig) -> bool:
    """Exact check A(a_i) q_j ~ p_{ij} for the whole grid."""
    for i, a in enumerate(cfg.a_params):
        cam = reduced_camera(a, cfg.field).matrix
        for j, q in enumerate(cfg.points):
            if not proportional(cam.apply(list(q)), cfg.observations[i][j], cfg.field):
                return False
    return True


# ---------------------------------------------------------------------------
# Frame normalization


@dataclass
class FrameNormalization:
    """World map S and per-image maps T_i sending chosen fiducials to the
    standard frame: S q_k ~ E_k with S E5 ~ E5, and T_i p_k ~ e_k."""

    S: ExactMatrix
    Ts: List[ExactMatrix]


def _replacement_dets(cols: List[List], replacement: List, field: Field) -> List:
    """det of the column matrix with column k replaced by `replacement`."""
    out = []
    for k in range(len(cols)):
        mod = [list(c) for c in cols]
        mod[k] = list(replacement)
        M = ExactMatrix([[mod[j][i] for j in range(len(mod))]
                         for i in range(len(replacement))], field)
        out.append(determinant(M))
    return out


def _scaled_inverse_map(cols: List[List], replacement: List, field: Field) -> ExactMatrix:
    dets = _replacement_dets(cols, replacement, field)
    if any(field.is_zero(d) for d in dets):
        raise GenericityError("degenerate quadruple: a replacement determinant vanishes")
    n = len(cols)
    scaled = ExactMatrix(
        [[field.mul(cols[j][i], dets[j]) for j in range(n)] for i in range(n)], field
    )
    if field.is_zero(determinant(scaled)):
        raise GenericityError("degenerate quadruple: fiducials do not span")
    return invert(scaled)


def normalize_frame(world4: Sequence[Tuple], images4: Sequence[Sequence[Tuple]],
                    field: Field = QQ) -> FrameNormalization:
    """Build S from four world points and T_i from each camera's four image
    points, verifying the frame postconditions exactly on return.

    S is the inverse of the column matrix [q1|q2|q3|q4] with column k
    scaled by the determinant obtained by replacing q_k with the unit
    point E5; each T_i is the analogue on [p1|p2|p3] with p4 as the
    replacement point.
    """
    if len(world4) != 4:
        raise ValueError("exactly four world points required")
    S = _scaled_inverse_map([list(q) for q in world4], list(E5), field)
    targetsE = [E1, E2, E3, E4]
    for k, q in enumerate(world4):
        if not proportional(S.apply(list(q)), targetsE[k], field):
            raise GenericityError("frame postcondition failed: S q_k !~ E_k")
    if not proportional(S.apply(list(E5)), E5, field):
        raise GenericityError("frame postcondition failed: S E5 !~ E5")

    Ts = []
    targets = [e1, e2, e3, e4]
    for pts in images4:
        if len(pts) != 4:
            raise ValueError("exactly four image points per camera required")
        T = _scaled_inverse_map([list(p) for p in pts[:3]], list(pts[3]), field)
        for k, p in enumerate(pts):
            if not proportional(T.apply(list(p)), targets[k], field):
                raise GenericityError("frame postcondition failed: T p_k !~ e_k")
        Ts.append(T)
    return FrameNormalization(S, Ts)


def is_reduced_form(M: ExactMatrix) -> bool:
    """Off-pattern entries exactly zero and a constant fourth column."""
    F = M.field
    if M.rows != 3 or M.cols != 4:
        return False
    for r in range(3):
        for c in range(3):
            if r != c and not F.is_zero(M.entries[r][c]):
                return False
    c4 = M.col(3)
    return c4[0] == c4[1] == c4[2]


# ---------------------------------------------------------------------------
# Dual fundamental matrices


def _det2(a, b, c, d, F: Field):
    return F.sub(F.mul(a, d), F.mul(b, c))


def dual_fundamental(q1: Sequence, q2: Sequence, field: Field = QQ) -> ExactMatrix:
    """The 3x3 dual fundamental matrix of two world points.

    Bilinear pairing: p1^T F p2 vanishes whenever p1 ~ A(a) q1 and
    p2 ~ A(a) q2 for a common reduced camera a.  The diagonal is
    identically zero and det F = 0.
    """
    F = field
    m = F.mul
    x, y = list(q1), list(q2)
    # 1-based coordinate helpers
    q1_ = lambda i: x[i - 1]
    q2_ = lambda i: y[i - 1]
    z = F.zero()
    f12 = m(m(q1_(2), q2_(1)), _det2(q1_(4), q1_(3), q2_(4), q2_(3), F))
    f13 = m(m(q1_(3), q2_(1)), _det2(q1_(2), q1_(4), q2_(2), q2_(4), F))
    f21 = m(m(q1_(1), q2_(2)), _det2(q1_(3), q1_(4), q2_(3), q2_(4), F))
    f23 = m(m(q1_(3), q2_(2)), _det2(q1_(4), q1_(1), q2_(4), q2_(1), F))
    f31 = m(m(q1_(1), q2_(3)), _det2(q1_(4), q1_(2), q2_(4), q2_(2), F))
    f32 = m(m(q1_(2), q2_(3)), _det2(q1_(1), q1_(4), q2_(1), q2_(4), F))
    return ExactMatrix([[z, f12, f13], [f21, z, f23], [f31, f32, z]], F)


def bilinear_form_value(Fmat: ExactMatrix, p1: Sequence, p2: Sequence):
    """p1^T F p2, exactly."""
    F = Fmat.field
    total = F.zero()
    for a in range(3):
        for b in range(3):
            total = F.add(total, F.mul(p1[a], F.mul(Fmat.entries[a][b], p2[b])))
    return total


def two_point_determinant_poly(q1: Sequence, q2: Sequence, ring: PolyRing,
                               camera: int, j1: int, j2: int,
                               field: Field = QQ) -> MultiPoly:
    """det [ A(q1)  p_{i j1}    0    ;  A(q2)  0  p_{i j2} ] as a bilinear
    polynomial in the image variables of the given camera and points.

    Expanded by Laplace over the two observation columns; each coefficient
    is a signed 4x4 minor of the stacked reduced cameras.
    """
    A1 = reduced_camera(q1, field).matrix
    A2 = reduced_camera(q2, field).matrix
    terms = {}
    Fld = ring.field
    for a in range(3):
        for b in range(3):
            rows = [A1.entries[r] for r in range(3) if r != a]
            rows += [A2.entries[r] for r in range(3) if r != b]
            coeff = determinant(ExactMatrix(rows, field))
            if Fld.is_zero(coeff):
                continue
            if (a + b) % 2:
                coeff = Fld.neg(coeff)
            exps = [0] * ring.nvars
            exps[ring.var_index(camera, j1, a + 1)] = 1
            exps[ring.var_index(camera, j2, b + 1)] = 1
            terms[tuple(exps)] = coeff
    return MultiPoly(ring, terms)


def reduced_two_focal_system(points: Sequence[Tuple], m: int,
                             field: Field = QQ) -> List[MultiPoly]:
    """The m * C(n, 2) bilinear forms cutting out the reduced resectioning
    variety for a sufficiently generic arrangement.

    Genericity requirements, each reported by name: points distinct, no
    point at a tetrahedron vertex, and no four points on a common 4-nodal
    cubic surface through the tetrahedron.
    """
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points")
    for idx, q in enumerate(points):
        for Ei in (E1, E2, E3, E4):
            if proportional(q, Ei, field):
                raise GenericityError(
                    f"point {idx + 1} coincides with a reference tetrahedron vertex"
                )
    for a in range(n):
        for b in range(a + 1, n):
            if proportional(points[a], points[b], field):
                raise GenericityError(f"points {a + 1} and {b + 1} coincide")
    if n >= 4:
        for quad in combinations(range(n), 4):
            if common_nodal_cubic([points[t] for t in quad], field):
                raise GenericityError(
                    f"points {tuple(t + 1 for t in quad)} lie on a common "
                    "4-nodal cubic through the reference tetrahedron"
                )
    ring = image_ring(m, n, field)
    forms = []
    for i in range(1, m + 1):
        for j1, j2 in combinations(range(1, n + 1), 2):
            forms.append(
                two_point_determinant_poly(points[j1 - 1], points[j2 - 1],
                                           ring, i, j1, j2, field)
            )
    return forms
