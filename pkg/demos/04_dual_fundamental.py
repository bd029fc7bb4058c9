"""Dual fundamental matrices and the reduced bilinear system.

Two known world points constrain the two images any single reduced
camera can produce: the constraint is bilinear and represented by a 3x3
matrix with zero diagonal.  The same polynomial arises as the stacked
6x6 determinant and as a specialization of the six-point focal
determinant, with proportionality constant one.
"""

import random

from resect.duality import (
    bilinear_form_value,
    dual_fundamental,
    reduced_camera,
    reduced_two_focal_system,
    two_point_determinant_poly,
)
from resect.exact import determinant
from resect.multipoly import image_ring

rng = random.Random(5)

def nz4():
    return tuple(rng.choice([x for x in range(-9, 10) if x]) for _ in range(4))

q1, q2 = nz4(), nz4()
F = dual_fundamental(q1, q2)
print("dual fundamental matrix of", q1, "and", q2, ":")
for row in F.entries:
    print("  ", row)
print("det F =", determinant(F))

a = nz4()
A = reduced_camera(a).matrix
p1, p2 = A.apply(list(q1)), A.apply(list(q2))
print("\nprojections through a =", a)
print("p1 =", p1, " p2 =", p2)
print("p1^T F p2 =", bilinear_form_value(F, p1, p2))

# same bilinear form from the stacked determinant, coefficient by coefficient
ring = image_ring(1, 2)
D = two_point_determinant_poly(q1, q2, ring, 1, 1, 2)
agree = all(
    D.coeff(tuple(
        1 if v in (ring.var_index(1, 1, a_ + 1), ring.var_index(1, 2, b_ + 1)) else 0
        for v in range(ring.nvars)
    )) == F.entries[a_][b_]
    for a_ in range(3) for b_ in range(3)
)
print("\ndeterminant form equals p1^T F p2 coefficient-wise:", agree)

# the full bilinear system for one camera and four generic points
while True:
    pts = [nz4() for _ in range(4)]
    try:
        forms = reduced_two_focal_system(pts, 1)
        break
    except ValueError:
        continue
print("\nbilinear system for m=1, n=4:", len(forms), "forms (one per point pair)")
