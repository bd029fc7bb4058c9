"""Hypercamera lifts, focal matrices, k-focal polynomials, membership and
DLT recovery, and the genericity predicates behind them.

The central construction: a world point q lifts to the 3x12 block matrix
Q = I_3 (x) q^T, so that Q vec(A^T) = A q for any 3x4 camera A.  Stacking
the lifts of k >= 6 points against a diagonal of observed image points
gives a 3k x (12+k) matrix whose maximal minors (the k-focals) are
multilinear constraints on the observations alone.

Minors are expanded by generalized Laplace expansion along the observation
columns: each term picks one row per point block, and its coefficient is a
12x12 minor of the stacked leftover hypercamera rows.  For honest lifts
that coefficient factors into three 4x4 determinants of world points, which
is what makes exhaustive generation cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple

from .exact import (
    ExactMatrix,
    Field,
    QQ,
    PrimeField,
    determinant,
    kernel_basis,
    rank,
)
from .multipoly import Monomial, MultiPoly, PolyRing, image_ring, lex_order
from .scenes import GenericityError, no_four_coplanar, proportional


class InconsistentSceneError(ValueError):
    """DLT kernel is zero-dimensional: the data admits no camera."""


class DegenerateArrangementError(ValueError):
    """DLT kernel has dimension >= 2: the arrangement is degenerate."""


# ---------------------------------------------------------------------------
# Lifts and focal matrices


def lift(q: Sequence, field: Field = QQ) -> ExactMatrix:
    """The 3x12 hypercamera lift I_3 (x) q^T of a nonzero world point."""
    if all(field.is_zero(x) for x in q):
        raise ValueError("cannot lift the zero vector")
    zero = field.zero()
    rows = []
    for c in range(3):
        row = [zero] * 12
        row[4 * c: 4 * c + 4] = list(q)
        rows.append(row)
    return ExactMatrix(rows, field)


def focal_matrix(points: Sequence[Sequence], obs: Sequence[Sequence],
                 field: Field = QQ) -> ExactMatrix:
    """The stacked 3k x (12+k) matrix of lifts and observation columns."""
    k = len(points)
    if len(obs) != k or k < 1:
        raise ValueError("need matching nonempty point and observation lists")
    zero = field.zero()
    rows = []
    for j, (q, p) in enumerate(zip(points, obs)):
        L = lift(q, field)
        for c in range(3):
            row = list(L.entries[c]) + [zero] * k
            row[12 + j] = p[c]
            rows.append(row)
    return ExactMatrix(rows, field)


# ---------------------------------------------------------------------------
# Focal specifications


@dataclass(frozen=True)
class FocalSpec:
    """A maximal minor of a k-point focal matrix.

    camera: 1-based camera index.
    sigma: 1-based point indices, strictly increasing, len k >= 6.
    rows: per-point row selections, tuples of coordinates from {1,2,3},
          with sizes summing to 12 + k.
    """

    camera: int
    sigma: Tuple[int, ...]
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.sigma)
        if k < 6:
            raise ValueError("k-focals need at least 6 points")
        if list(self.sigma) != sorted(set(self.sigma)):
            raise ValueError("sigma must be strictly increasing")
        if len(self.rows) != k:
            raise ValueError("one row selection per point required")
        total = 0
        for r in self.rows:
            if not r or list(r) != sorted(set(r)) or any(c not in (1, 2, 3) for c in r):
                raise ValueError("row selections must be nonempty subsets of {1,2,3}")
            total += len(r)
        if total != 12 + k:
            raise ValueError(f"row sizes must sum to 12+k = {12 + k}, got {total}")

    @property
    def k(self) -> int:
        return len(self.sigma)


def row_selections(k: int):
    """All per-point row selections for a k-focal (sizes sum to 12+k)."""
    deficit = 2 * k - 12
    subsets = {0: [(1, 2, 3)], 1: [(1, 2), (1, 3), (2, 3)], 2: [(1,), (2,), (3,)]}

    def rec(t, remaining):
        if t == k:
            if remaining == 0:
                yield ()
            return
        hi = min(2, remaining)
        for d in range(hi + 1):
            if remaining - d <= 2 * (k - t - 1):
                for rest in rec(t + 1, remaining - d):
                    for r in subsets[d]:
                        yield (r,) + rest

    yield from rec(0, deficit)


def count_row_selections(k: int) -> int:
    """Number of valid row selections: [x^(2k-12)] (1 + 3x + 3x^2)^k."""
    coeffs = [1]
    for _ in range(k):
        new = [0] * (len(coeffs) + 2)
        for i, c in enumerate(coeffs):
            new[i] += c
            new[i + 1] += 3 * c
            new[i + 2] += 3 * c
        coeffs = new
    target = 2 * k - 12
    return coeffs[target] if 0 <= target < len(coeffs) else 0


def count_specs(n: int, kmax: Optional[int] = None) -> int:
    """Total number of (sigma, rows) specs per camera for an n-point
    arrangement, with 6 <= k <= min(n, kmax or 12)."""
    kmax = min(n, kmax if kmax is not None else 12)
    total = 0
    for k in range(6, kmax + 1):
        ncomb = 1
        for t in range(k):
            ncomb = ncomb * (n - t) // (t + 1)
        total += ncomb * count_row_selections(k)
    return total


# ---------------------------------------------------------------------------
# Minor expansion


def _det4_cache_factory(points, field):
    cache = {}

    def det4(idx4):
        d = cache.get(idx4)
        if d is None:
            M = ExactMatrix([list(points[j]) for j in idx4], field)
            d = determinant(M)
            cache[idx4] = d
        return d

    return det4


def _inversions_parity(labels) -> int:
    inv = 0
    for a in range(len(labels)):
        la = labels[a]
        for b in range(a + 1, len(labels)):
            if la > labels[b]:
                inv += 1
    return inv & 1


def k_focal_poly(points: Sequence[Sequence], spec: FocalSpec, ring: PolyRing,
                 field: Field = QQ, transforms=None) -> MultiPoly:
    """The focal minor named by spec, expanded as a polynomial in the
    image variables of camera spec.camera.

    Sign convention: generalized Laplace expansion along the observation
    columns of the minor matrix with rows in their natural order.

    transforms: optional per-point 3x3 matrices H_j replacing the lift of
    point j by H_j (I_3 (x) q_j^T); used for generic coordinate changes.
    """
    k = spec.k
    sel = [tuple(sorted(r)) for r in spec.rows]
    sizes = [len(r) for r in sel]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)

    # per-block variable ids: p_{camera, sigma_t}[c]
    var_ids = [
        {c: ring.var_index(spec.camera, spec.sigma[t], c) for c in sel[t]}
        for t in range(k)
    ]

    col_parity = (12 * k + k * (k + 1) // 2) & 1  # sum of the p-column indices

    structured = transforms is None
    if not structured:
        hyper_rows = _transformed_rows(points, spec, transforms, field)
    det4 = _det4_cache_factory(points, field) if structured else None

    F = ring.field
    terms = {}
    for choice in product(*sel):
        # global (1-based) row indices of the rows routed to the p-columns
        row_parity = 0
        for t, c in enumerate(choice):
            row_parity += offsets[t] + sel[t].index(c) + 1
        sign_neg = (row_parity + col_parity) & 1

        if structured:
            slots = {1: [], 2: [], 3: []}
            labels = []
            ok = True
            for t, c in enumerate(choice):
                for cc in sel[t]:
                    if cc != c:
                        slots[cc].append(spec.sigma[t] - 1)
                        labels.append(cc)
            if any(len(slots[c]) != 4 for c in (1, 2, 3)):
                continue
            coeff = F.one()
            for c in (1, 2, 3):
                coeff = F.mul(coeff, det4(tuple(slots[c])))
                if F.is_zero(coeff):
                    break
            if F.is_zero(coeff):
                continue
            if _inversions_parity(labels):
                coeff = F.neg(coeff)
        else:
            rows12 = []
            for t, c in enumerate(choice):
                base = hyper_rows[t]
                for cc in sel[t]:
                    if cc != c:
                        rows12.append(base[cc])
            coeff = determinant(ExactMatrix(rows12, field))
            if F.is_zero(coeff):
                continue

        if sign_neg:
            coeff = F.neg(coeff)
        exps = [0] * ring.nvars
        for t, c in enumerate(choice):
            exps[var_ids[t][c]] = 1
        terms[tuple(exps)] = coeff
    return MultiPoly(ring, terms)


def _transformed_rows(points, spec, transforms, field):
    """Per-block dict {c: 12-row} of transformed hypercamera rows."""
    out = []
    for t in range(spec.k):
        j = spec.sigma[t] - 1
        L = lift(points[j], field)
        H = transforms[j]
        HL = H.matmul(L)
        out.append({c: list(HL.entries[c - 1]) for c in (1, 2, 3)})
    return out


def focal_minor_matrix(points: Sequence[Sequence], spec: FocalSpec,
                       obs: Sequence[Sequence], field: Field = QQ,
                       transforms=None) -> ExactMatrix:
    """The square (12+k) x (12+k) minor matrix named by spec, with the
    observation columns filled from obs (one 3-vector per sigma entry)."""
    zero = field.zero()
    rows = []
    for t in range(spec.k):
        j = spec.sigma[t] - 1
        L = lift(points[j], field)
        if transforms is not None:
            L = transforms[j].matmul(L)
        for c in sorted(spec.rows[t]):
            row = list(L.entries[c - 1]) + [zero] * spec.k
            row[12 + t] = obs[t][c - 1]
            rows.append(row)
    return ExactMatrix(rows, field)


# ---------------------------------------------------------------------------
# Generator systems


@dataclass
class FocalSystem:
    """All (or a sampled subset of) focal generators for an arrangement."""

    points: List[Tuple]
    m: int
    field: Field
    ring: PolyRing
    entries: List[Tuple[FocalSpec, MultiPoly]]
    total_specs: int
    sampled: bool
    seed: Optional[int] = None

    def polynomials(self) -> List[MultiPoly]:
        return [p for _, p in self.entries]

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "n": len(self.points),
            "field": self.field.tag,
            "total_specs": self.total_specs,
            "sampled": self.sampled,
            "generators": [
                {
                    "camera": s.camera,
                    "sigma": list(s.sigma),
                    "rows": [list(r) for r in s.rows],
                    "poly": p.to_json_dict(),
                }
                for s, p in self.entries
            ],
        }


def generators(points: Sequence[Sequence], m: int = 1, field: Field = QQ,
               max_specs: Optional[int] = None, seed: int = 0) -> FocalSystem:
    """All k-focals for 6 <= k <= min(n, 12) over every camera index,
    deduplicated up to scalar.

    When the exhaustive spec count per camera exceeds max_specs, row
    selections are sampled deterministically (seeded) and the system is
    flagged as sampled with the exhaustive count reported.

    Raises GenericityError unless no four points are coplanar.
    """
    n = len(points)
    if n < 6:
        raise ValueError("generators need n >= 6 points")
    if not no_four_coplanar(points, field):
        raise GenericityError("four of the world points are coplanar")
    ring = image_ring(m, n, field)
    order = lex_order(ring)
    total = count_specs(n)
    sample = max_specs is not None and total > max_specs
    rng = random.Random(seed) if sample else None

    base_entries = []  # camera-1 polynomials
    seen = set()
    kmax = min(n, 12)
    budget_left = max_specs if sample else None
    for k in range(6, kmax + 1):
        sels = list(row_selections(k))
        for sigma in combinations(range(1, n + 1), k):
            if sample:
                if budget_left <= 0:
                    break
                take = min(len(sels), max(1, budget_left // max(1, _remaining_sigmas(n, k, sigma))))
                chosen = sels if len(sels) <= take else rng.sample(sels, take)
                budget_left -= len(chosen)
            else:
                chosen = sels
            for rows in chosen:
                spec = FocalSpec(1, sigma, rows)
                poly = k_focal_poly(points, spec, ring, field)
                if poly.is_zero():
                    continue
                normal = poly.monic(order)
                key = tuple(sorted(normal.terms.items()))
                if key in seen:
                    continue
                seen.add(key)
                base_entries.append((spec, normal))
        if sample and budget_left <= 0:
            break

    entries = list(base_entries)
    for cam in range(2, m + 1):
        var_map = {}
        for j in range(1, n + 1):
            for c in (1, 2, 3):
                var_map[ring.var_index(1, j, c)] = ring.var_index(cam, j, c)
        for spec, poly in base_entries:
            entries.append(
                (FocalSpec(cam, spec.sigma, spec.rows), poly.map_vars(ring, var_map))
            )
    return FocalSystem(
        [tuple(q) for q in points], m, field, ring, entries,
        total_specs=total * m, sampled=sample, seed=seed if sample else None,
    )


def _remaining_sigmas(n, k, sigma):
    # rough count of sigma choices not yet visited at this k; used only to
    # spread a sampling budget, so a crude estimate is fine
    ncomb = 1
    for t in range(k):
        ncomb = ncomb * (n - t) // (t + 1)
    return max(1, ncomb)


def observation_values(ring: PolyRing, obs_grid: Sequence[Sequence]) -> list:
    """Flatten an m x n observation grid into a ring-variable value vector."""
    m, n = ring.image_shape
    values = [ring.field.zero()] * ring.nvars
    for i in range(m):
        for j in range(n):
            p = obs_grid[i][j]
            for c in (1, 2, 3):
                values[ring.var_index(i + 1, j + 1, c)] = p[c - 1]
    return values


def evaluate_system(system: FocalSystem, obs_grid: Sequence[Sequence]) -> list:
    """Exact value of every generator at an observation grid."""
    values = observation_values(system.ring, obs_grid)
    return [poly.evaluate(values) for _, poly in system.entries]


# ---------------------------------------------------------------------------
# Membership and DLT


def membership(points: Sequence[Sequence], obs_grid: Sequence[Sequence],
               field: Field = QQ) -> bool:
    """Rank-based membership in the resectioning variety: for every camera
    the n-point focal matrix must have rank < 12 + n.

    Requires no four points coplanar (GenericityError otherwise).  For
    n < 6 every grid is a member.
    """
    if not no_four_coplanar(points, field):
        raise GenericityError("four of the world points are coplanar")
    n = len(points)
    for obs_row in obs_grid:
        M = focal_matrix(points, obs_row, field)
        if rank(M) >= 12 + n:
            return False
    return True


def membership_by_evaluation(system: FocalSystem,
                             obs_grid: Sequence[Sequence]) -> bool:
    """Membership via vanishing of every generator of a FocalSystem."""
    F = system.field
    return all(F.is_zero(v) for v in evaluate_system(system, obs_grid))


def resect_dlt(points: Sequence[Sequence], obs_row: Sequence[Sequence],
               field: Field = QQ):
    """Camera recovery from one camera's observations by kernel extraction.

    Returns (camera, lambdas): the 3x4 camera unpacked from the kernel
    vector v as rows v[0:4], v[4:8], v[8:12], and the proportionality
    factors lambda_j = -v[12+j].  The camera satisfies A q_j ~ p_j exactly
    for every j with lambda_j != 0.

    Raises InconsistentSceneError when the kernel is trivial (noisy data)
    and DegenerateArrangementError when it has dimension >= 2.
    """
    n = len(points)
    if n < 6:
        raise ValueError("resectioning needs n >= 6 points")
    M = focal_matrix(points, obs_row, field)
    basis = kernel_basis(M)
    if len(basis) == 0:
        raise InconsistentSceneError("focal matrix has full column rank")
    if len(basis) > 1:
        raise DegenerateArrangementError(
            f"kernel dimension {len(basis)} >= 2: degenerate arrangement"
        )
    v = basis[0]
    A = ExactMatrix([v[0:4], v[4:8], v[8:12]], field)
    lambdas = [field.neg(v[12 + j]) for j in range(n)]
    return A, lambdas


# ---------------------------------------------------------------------------
# Genericity machinery


@dataclass
class CheckResult:
    ok: bool
    exhaustive: bool
    checked: int
    total: int

    def __bool__(self):
        return self.ok


def _is_structured_lift(H: ExactMatrix):
    """If H equals I_3 (x) q^T for some q, return q, else None."""
    F = H.field
    if H.rows != 3 or H.cols != 12:
        return None
    q = H.entries[0][0:4]
    for c in range(3):
        for col in range(12):
            want = q[col - 4 * c] if 4 * c <= col < 4 * c + 4 else F.zero()
            if H.entries[c][col] != want:
                return None
    return tuple(q)


def minor_generic(hypercams: Sequence[ExactMatrix], field: Field = QQ,
                  exhaustive_limit: int = 3_000_000, samples: int = 20000,
                  seed: int = 0) -> CheckResult:
    """Are all 12x12 minors of the stacked 12 x 3n transpose matrix nonzero?

    Minors are indexed by 12-subsets of the 3n hypercamera rows.  For
    honest lifts each minor factors through three 4x4 world-point minors,
    which keeps exhaustive checking cheap; for generic matrices minors are
    screened mod p with an exact recheck of any vanishing screen.  Beyond
    exhaustive_limit combinations a seeded sample is checked instead.
    """
    n = len(hypercams)
    rows = []
    structured = []
    for H in hypercams:
        q = _is_structured_lift(H)
        for c in range(3):
            rows.append(H.entries[c])
            structured.append((q, c + 1) if q is not None else None)
    all_structured = all(s is not None for s in structured)
    total = _ncr(3 * n, 12)
    exhaustive = total <= exhaustive_limit

    pts = [s[0] for s in structured[::3]] if all_structured else None
    det4 = _det4_cache_factory(pts, field) if all_structured else None

    screen_p = 2_147_483_629
    if isinstance(field, PrimeField):
        screen_p = None

    def minor_nonzero(idx):
        if all_structured:
            slots = {1: [], 2: [], 3: []}
            for r in idx:
                q, c = structured[r]
                slots[c].append(r // 3)
            if any(len(slots[c]) != 4 for c in (1, 2, 3)):
                return False
            for c in (1, 2, 3):
                if field.is_zero(det4(tuple(slots[c]))):
                    return False
            return True
        sub = [rows[r] for r in idx]
        if screen_p is not None:
            if _det_mod(sub, screen_p) != 0:
                return True
        d = determinant(ExactMatrix(sub, field))
        return not field.is_zero(d)

    checked = 0
    if exhaustive:
        for idx in combinations(range(3 * n), 12):
            checked += 1
            if not minor_nonzero(idx):
                return CheckResult(False, True, checked, total)
        return CheckResult(True, True, checked, total)
    rng = random.Random(seed)
    universe = 3 * n
    for _ in range(samples):
        idx = tuple(sorted(rng.sample(range(universe), 12)))
        checked += 1
        if not minor_nonzero(idx):
            return CheckResult(False, False, checked, total)
    return CheckResult(True, False, checked, total)


def _det_mod(rows, p):
    """Determinant of an integer/Fraction matrix mod p (0 on bad denominators)."""
    n = len(rows)
    M = []
    for r in rows:
        mr = []
        for x in r:
            num = getattr(x, "numerator", x)
            den = getattr(x, "denominator", 1)
            mr.append((num * pow(den, p - 2, p)) % p)
        M.append(mr)
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = p - det
        det = (det * M[c][c]) % p
        inv = pow(M[c][c], p - 2, p)
        for i in range(c + 1, n):
            f = (M[i][c] * inv) % p
            if f:
                Mi, Mc = M[i], M[c]
                for j in range(c, n):
                    Mi[j] = (Mi[j] - f * Mc[j]) % p
    return det % p


def _ncr(n, r):
    if r > n:
        return 0
    out = 1
    for t in range(r):
        out = out * (n - t) // (t + 1)
    return out


def rowspan_uniform(hypercams: Sequence[ExactMatrix], field: Field = QQ,
                    exhaustive_limit_n: int = 10, samples: int = 5000,
                    seed: int = 0) -> CheckResult:
    """Do the row spans of every subset of >= 12/3 = 4 hypercameras sum to
    the full 12-dimensional space?

    Spanning is monotone in the subset, so checking all 4-subsets decides
    every larger subset as well.  Exhaustive for n <= exhaustive_limit_n,
    seeded sampling beyond.
    """
    n = len(hypercams)
    if n < 4:
        return CheckResult(False, True, 0, 0)
    quads = list(combinations(range(n), 4))
    total = len(quads)
    exhaustive = n <= exhaustive_limit_n
    if not exhaustive:
        rng = random.Random(seed)
        quads = [quads[rng.randrange(total)] for _ in range(samples)]
    checked = 0
    for quad in quads:
        stacked = []
        for t in quad:
            stacked.extend(hypercams[t].entries)
        checked += 1
        if rank(ExactMatrix(stacked, field)) < 12:
            return CheckResult(False, exhaustive, checked, total)
    return CheckResult(True, exhaustive, checked, total)


# ---------------------------------------------------------------------------
# Generic initial behaviour


@dataclass
class GinResult:
    leading: Monomial
    support: int
    seed: Optional[int]


def random_image_transforms(n: int, seed: int, field: Field = QQ,
                            lo: int = -9999, hi: int = 9999) -> List[ExactMatrix]:
    """Seed-deterministic invertible 3x3 coordinate changes, one per image.

    Entries are uniform integers in [lo, hi]; the default range is wide
    enough that the bordered minors behind a generic coordinate change
    vanish only with negligible probability.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        while True:
            H = ExactMatrix(
                [[field.from_int(rng.randint(lo, hi)) for _ in range(3)]
                 for _ in range(3)], field)
            if not field.is_zero(determinant(H)):
                out.append(H)
                break
    return out


def gin_leading(points: Sequence[Sequence], seed: Optional[int],
                field: Field = QQ) -> GinResult:
    """Lex leading monomial of the 6-point focal determinant after a seeded
    generic coordinate change in each image (seed None: no change).

    Requires n = 6, m = 1 and no four points coplanar.  Also reports the
    support size of the transformed polynomial.
    """
    n = len(points)
    if n != 6:
        raise ValueError("gin_leading is defined for n = 6")
    if not no_four_coplanar(points, field):
        raise GenericityError("four of the world points are coplanar")
    ring = image_ring(1, 6, field)
    spec = FocalSpec(1, tuple(range(1, 7)), tuple((1, 2, 3) for _ in range(6)))
    transforms = None if seed is None else random_image_transforms(6, seed, field)
    poly = k_focal_poly(points, spec, ring, field, transforms=transforms)
    if poly.is_zero():
        raise GenericityError("focal determinant vanished identically")
    lm = Monomial(ring, poly.leading_exps(lex_order(ring)))
    return GinResult(lm, poly.num_terms(), seed)


def verify_camera(points, obs_row, A: ExactMatrix, lambdas=None) -> bool:
    """Cross-multiplication check: A q_j ~ p_j for all j (skipping any j
    with lambda_j = 0 when lambdas are supplied)."""
    F = A.field
    for j, (q, p) in enumerate(zip(points, obs_row)):
        if lambdas is not None and F.is_zero(lambdas[j]):
            continue
        if not proportional(A.apply(list(q)), p, F):
            return False
    return True
