"""Closed-form Euclidean distance degrees, evaluated exactly."""

from __future__ import annotations

from fractions import Fraction


def formula_resectioning(n: int) -> int:
    """ED degree of the n-point resectioning variety:
    (80/3) n^3 - 368 n^2 + (5068/3) n - 2580, for n >= 6."""
    if n < 6:
        raise ValueError("resectioning formula requires n >= 6")
    value = (
        Fraction(80, 3) * n**3
        - 368 * n**2
        + Fraction(5068, 3) * n
        - 2580
    )
    if value.denominator != 1:
        raise ArithmeticError(f"formula produced a non-integer at n={n}")
    return int(value)


def formula_multiview(m: int) -> int:
    """ED degree of the m-camera multiview (triangulation) variety:
    (9/2) m^3 - (21/2) m^2 + 8 m - 4, for m >= 2."""
    if m < 2:
        raise ValueError("multiview formula requires m >= 2")
    value = (
        Fraction(9, 2) * m**3
        - Fraction(21, 2) * m**2
        + 8 * m
        - 4
    )
    if value.denominator != 1:
        raise ArithmeticError(f"formula produced a non-integer at m={m}")
    return int(value)
