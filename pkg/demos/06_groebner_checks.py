"""Groebner-flavored evidence over a prime field.

The focal generators of a seven-point arrangement form a Groebner basis
for every monomial order; sampling S-pairs and reducing them to zero is
cheap, machine-checkable evidence.  The same machinery drives the
finite-field critical-degree oracle, here exercised on plane curves
where the answer is classical, plus a budgeted attempt at the six-point
instance.
"""

import random

from resect.eddegree.finitefield import critical_ideal, degree_oracle
from resect.exact import PrimeField
from resect.focal import generators
from resect.multipoly import (
    Budget,
    MultiPoly,
    generic_ring,
    grevlex_order,
    ideal_quotient_by_ideal,
    lex_order,
    reduce as normal_form,
    s_polynomial,
    standard_monomial_count,
)
from resect.scenes import random_arrangement

Fp = PrimeField(32003)

pts = random_arrangement(7, seed=3, field=Fp)
system = generators(pts, 1, Fp)
polys = system.polynomials()
print(f"seven points over F_32003: {len(polys)} focal generators")

ring = system.ring
rng = random.Random(0)
for name, order in (("lex", lex_order(ring)), ("grevlex", grevlex_order(ring))):
    zero = 0
    for _ in range(25):
        i, j = rng.sample(range(len(polys)), 2)
        sp = s_polynomial(polys[i], polys[j], order)
        if normal_form(sp, polys, order).is_zero():
            zero += 1
    print(f"  {name}: {zero}/25 sampled S-pairs reduce to zero")

# the critical-degree pipeline on a curve with a classical answer
R = generic_ring(["x", "y"], Fp)
x, y = MultiPoly.variable(R, 0), MultiPoly.variable(R, 1)
order = grevlex_order(R)
H = x * x + 4 * y * y - 1
gens = critical_ideal(H, [7, 11])
res = ideal_quotient_by_ideal(gens, [H.derivative(0), H.derivative(1)],
                              order, Budget())
print("\nellipse distance-criticality degree:",
      standard_monomial_count(res.generators, order), "(classically 4)")

# the six-point instance is a stretch for a pure-Python engine; the
# budget makes the outcome explicit either way
report = degree_oracle(seed=3, budget=Budget(max_pairs=2000, wall_seconds=60))
print("\nsix-point oracle with a 60s budget:", report.status,
      "" if report.count is None else f"count={report.count}")
