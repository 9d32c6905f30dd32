"""Weil heights, Mahler measures and integer polynomials."""

from src.heights.mahler import mahler_measure
from src.heights.polynomial import IntPolynomial
from src.heights.weil import (
    RadicalGenerator,
    eisenstein_check,
    f_value,
    radical_generator,
    radical_height,
    weil_height_from_minpoly,
)

__all__ = [
    "IntPolynomial",
    "RadicalGenerator",
    "eisenstein_check",
    "f_value",
    "mahler_measure",
    "radical_generator",
    "radical_height",
    "weil_height_from_minpoly",
]
