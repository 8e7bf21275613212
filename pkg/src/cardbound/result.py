"""Common result type for all bound computations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CardboundError

DSB = "dsb"
FDSB = "fdsb"
PB = "pb"
AGM = "agm"
METHODS = (AGM, PB, DSB, FDSB)


@dataclass(frozen=True)
class BoundValue:
    value: Fraction
    method: str
    root_used: str | None = None
    b_effective: dict = field(default_factory=dict)  # alias -> Fraction or inf
    notes: tuple = ()

    def __post_init__(self):
        if self.value < 0:
            raise CardboundError(f"bound value must be non-negative, got {self.value}")
