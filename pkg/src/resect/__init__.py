"""Exact and numerical tools for camera resectioning varieties.

Subpackages and modules:

- exact:     rational / prime-field linear algebra (rank, kernel,
             determinant, Schur complement), all exact.
- multipoly: sparse multigraded polynomials, monomial orders, budgeted
             Groebner machinery.
- scenes:    world points, cameras, observations, genericity predicates.
- focal:     hypercamera lifts, focal minors, membership, DLT recovery.
- duality:   reduced cameras, the Cremona involution, camera/point
             swapping, frame normalization, dual fundamental matrices.
- eddegree:  rational parametrizations, critical systems, homotopy
             tracking, monodromy counts, and closed-form ED degrees.
"""

from .exact import ExactMatrix, PrimeField, QQ, determinant, kernel_basis, rank, schur_reduce

__all__ = [
    "ExactMatrix",
    "PrimeField",
    "QQ",
    "determinant",
    "kernel_basis",
    "rank",
    "schur_reduce",
]

__version__ = "0.1.0"
