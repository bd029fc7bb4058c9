"""Six points, one camera: the focal determinant as an exact constraint.

Walks through the basic pipeline: lift world points to hypercameras,
stack them against the observations, and expand the unique maximal minor
into a polynomial on the image coordinates.  The polynomial vanishes on
every exact scene, has exactly 90 of the 729 conceivable monomials, and
its lexicographic leading monomial changes after a generic coordinate
change in each image.
"""

from resect.exact import determinant, rank
from resect.focal import (
    FocalSpec,
    focal_matrix,
    gin_leading,
    k_focal_poly,
    lift,
)
from resect.multipoly import Monomial, image_ring, lex_order
from resect.scenes import project, random_arrangement, random_camera

pts = random_arrangement(6, seed=11)
camera = random_camera(7)
obs = [project(camera, q) for q in pts]

print("world points:")
for q in pts:
    print("  ", q)

# The lift turns resectioning into projecting vec(A^T) from P^11: each
# point q becomes the 3x12 block matrix I_3 (x) q^T.
L = lift(pts[0])
print("\nlift of the first point is 3x12 with q^T repeated:")
for row in L.entries:
    print("  ", row)

# Stacked against the observations, consistency forces a rank drop.
M = focal_matrix(pts, obs)
print(f"\nfocal matrix is {M.rows}x{M.cols}; rank on exact data:", rank(M))
print("18x18 determinant on exact data:", determinant(M))

# Expanding the determinant symbolically gives the hypersurface equation.
ring = image_ring(1, 6)
spec = FocalSpec(1, tuple(range(1, 7)), ((1, 2, 3),) * 6)
poly = k_focal_poly(pts, spec, ring)
print("\nmonomial support of the focal polynomial:", poly.num_terms(), "of 729")
lm = Monomial(ring, poly.leading_exps(lex_order(ring)))
print("lex leading monomial:", lm)

# A generic coordinate change in each image fills in all 729 monomials
# and moves the leading monomial to the all-first-coordinates product.
res = gin_leading(pts, seed=5)
print("after generic per-image coordinate change:")
print("  support:", res.support)
print("  leading monomial:", res.leading)
