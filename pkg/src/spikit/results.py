"""Outcomes of the optimization routines."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable


@dataclass
class Attained:
    """The optimum is achieved by an actual SPI."""

    spi: Any
    value: Fraction


@dataclass
class Supremum:
    """The optimum is only approached; ``family(eps)`` is a valid SPI for every eps its producer admits."""

    value: Fraction
    family: Callable[[Fraction], Any]
    limit: Any = None


@dataclass
class NoSpi:
    pass
