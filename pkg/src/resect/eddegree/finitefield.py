"""Finite-field symbolic oracle for the six-point critical count.

Over a prime field, the resectioning hypersurface H of six generic points
(in the chart where every third coordinate is 1) has critical equations
given by the 2x2 minors of

    [ x - d ; grad H ]

together with H itself.  Quotienting that ideal by <dH/du1, dH/dv1>
removes the singular locus; for generic data the result is a
zero-dimensional ideal whose standard-monomial count is the critical-point
count of the distance optimization.  The Groebner computations run under
explicit budgets and may report budget exhaustion instead of an answer.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from ..exact import PrimeField
from ..focal import FocalSpec, k_focal_poly
from ..multipoly import (
    Budget,
    MultiPoly,
    PolyRing,
    generic_ring,
    grevlex_order,
    ideal_quotient_by_ideal,
    image_ring,
    standard_monomial_count,
)
from ..scenes import no_four_coplanar


def chart_ring(field) -> PolyRing:
    names = []
    for j in range(1, 7):
        names += [f"u{j}", f"v{j}"]
    return generic_ring(names, field)


def hypersurface_chart_poly(points: Sequence, field: PrimeField) -> MultiPoly:
    """The six-point focal determinant in the pixel chart p_j[3] = 1,
    as a polynomial in u1, v1, ..., u6, v6."""
    ring6 = image_ring(1, 6, field)
    spec = FocalSpec(1, tuple(range(1, 7)), tuple((1, 2, 3) for _ in range(6)))
    H = k_focal_poly(points, spec, ring6, field)
    one = field.one()
    H = H.substitute({ring6.var_index(1, j, 3): one for j in range(1, 7)})
    ring = chart_ring(field)
    var_map = {}
    for j in range(1, 7):
        var_map[ring6.var_index(1, j, 1)] = 2 * (j - 1)
        var_map[ring6.var_index(1, j, 2)] = 2 * (j - 1) + 1
    return H.map_vars(ring, var_map)


def critical_ideal(H: MultiPoly, data: Sequence) -> list:
    """Generators: all 2x2 minors of [x - d ; grad H], plus H."""
    ring = H.ring
    F = ring.field
    nv = ring.nvars
    partials = [H.derivative(v) for v in range(nv)]
    shifted = [
        MultiPoly.variable(ring, v) - MultiPoly.constant(ring, F.from_int(data[v]))
        for v in range(nv)
    ]
    gens = []
    for a in range(nv):
        for b in range(a + 1, nv):
            gens.append(shifted[a] * partials[b] - shifted[b] * partials[a])
    gens.append(H)
    return gens


@dataclass
class OracleReport:
    status: str                  # "ok" | "budget_exceeded"
    count: Optional[int]
    seed: int
    prime: int
    stage: str
    wall_time_s: float
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "count": self.count,
            "seed": self.seed,
            "prime": self.prime,
            "stage": self.stage,
            "wall_time_s": round(self.wall_time_s, 3),
            "detail": self.detail,
        }


def degree_oracle(seed: int = 0, prime: int = 32003,
                  budget: Optional[Budget] = None) -> OracleReport:
    """Run the full pipeline for a random six-point instance over F_p.

    Pipeline: Groebner basis of the critical ideal, ideal quotient by the
    two distinguished partials, standard-monomial count.  Budget
    exhaustion at any stage is reported, not raised.
    """
    t0 = time.monotonic()
    field = PrimeField(prime)
    rng = random.Random(seed)
    while True:
        points = [tuple(rng.randrange(prime) for _ in range(4)) for _ in range(6)]
        if no_four_coplanar(points, field):
            break
    data = [rng.randrange(prime) for _ in range(12)]

    H = hypersurface_chart_poly(points, field)
    gens = critical_ideal(H, data)
    ring = H.ring
    order = grevlex_order(ring)
    budget = budget or Budget(max_pairs=200000, max_terms=400000,
                              max_basis=4000, wall_seconds=1800)

    j_gens = [H.derivative(0), H.derivative(1)]  # dH/du1, dH/dv1
    quotient = ideal_quotient_by_ideal(gens, j_gens, order, budget)
    if not quotient.completed:
        return OracleReport("budget_exceeded", None, seed, prime,
                            "ideal_quotient", time.monotonic() - t0,
                            quotient.reason)
    count = standard_monomial_count(quotient.generators, order)
    elapsed = time.monotonic() - t0
    if count == float("inf"):
        return OracleReport("ok", None, seed, prime, "count", elapsed,
                            "quotient ideal is not zero-dimensional")
    return OracleReport("ok", int(count), seed, prime, "count", elapsed)
