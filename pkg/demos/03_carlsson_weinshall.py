"""Carlsson-Weinshall duality in action.

Reduced cameras fix the reference tetrahedron, so a camera is a point of
P^3 and the flip A(a) q = A(q) a swaps cameras with world points.  The
demo checks the flip entrywise, sends a configuration of 2 cameras and 3
points to its dual with 3 cameras and 2 points, and normalizes a general
scene into the reduced frame.
"""

import random

from resect.duality import (
    center,
    cremona,
    cw_swap,
    is_consistent,
    is_reduced_form,
    normalize_frame,
    reduced_camera,
    synthesize_reduced,
)
from resect.exact import QQ, invert
from resect.scenes import project, proportional, random_arrangement, random_camera

rng = random.Random(1)

def nz4():
    return tuple(rng.choice([x for x in range(-9, 10) if x]) for _ in range(4))

a, q = nz4(), nz4()
print("a =", a, " q =", q)
print("A(a) q =", reduced_camera(a).matrix.apply(list(q)))
print("A(q) a =", reduced_camera(q).matrix.apply(list(a)))

# the camera center is the Cremona involution of the parameter
print("\ncenter of A(a):", center(reduced_camera(a).matrix))
print("Cremona image of a:", cremona(a))
print("involution check C(C(a)) ~ a:",
      proportional(cremona(cremona(a)), a, QQ))

# two cameras x three points  <->  three cameras x two points
cfg = synthesize_reduced([nz4() for _ in range(2)], [nz4() for _ in range(3)])
dual = cw_swap(cfg)
print("\noriginal: m =", cfg.m, " n =", cfg.n, " consistent:", is_consistent(cfg))
print("swapped:  m =", dual.m, " n =", dual.n, " consistent:", is_consistent(dual))
print("swap is an involution:", cw_swap(dual) == cfg)

# a general scene enters the reduced world through frame normalization
# (small coordinates keep the exact output readable)
from resect.exact import ExactMatrix, rank as mat_rank
while True:
    fiducials = [tuple(rng.randint(-5, 5) for _ in range(4)) for _ in range(4)]
    cam = ExactMatrix([[rng.randint(-5, 5) for _ in range(4)] for _ in range(3)])
    try:
        if mat_rank(cam) != 3:
            continue
        images = [[project(cam, p) for p in fiducials]]
        frame = normalize_frame(fiducials, images)
        break
    except ValueError:
        continue
M = frame.Ts[0].matmul(cam).matmul(invert(frame.S))
# rescale for readable output (the camera is projective anyway)
from fractions import Fraction
from math import gcd, lcm
scale = lcm(*[Fraction(x).denominator for row in M.entries for x in row])
flat = [int(Fraction(x) * scale) for row in M.entries for x in row]
g = gcd(*[x for x in flat if x]) or 1
print("\nnormalized camera T A S^-1 (primitive integer rescaling):")
for r in range(3):
    print("  ", [x // g for x in flat[4 * r: 4 * r + 4]])
print("has the reduced pattern:", is_reduced_form(M))
