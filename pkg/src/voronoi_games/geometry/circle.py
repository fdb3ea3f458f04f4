"""Positions on the unit-circumference circle.

Positions are plain numbers in [0, 1): ``float`` for sampled instances and
``fractions.Fraction`` for exact ones. All arithmetic reduces modulo 1 and
keeps the input's number type.
"""

from fractions import Fraction
from typing import Union

Number = Union[float, Fraction]


def normalize_position(value: Number) -> Number:
    return value % 1


def clockwise_distance(a: Number, b: Number) -> Number:
    """Length of the clockwise arc from ``a`` to ``b``, in [0, 1)."""
    return (b - a) % 1


def counterclockwise_distance(a: Number, b: Number) -> Number:
    return (a - b) % 1
