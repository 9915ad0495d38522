"""Evidence-table rows and named bounds, kept free of solver imports."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InvalidInputError


@dataclass(frozen=True)
class Bound:
    """A named closed-form bound.

    ``unit`` is ``"density"`` (compared with value/total) or ``"count"``
    (compared with value).  Non-finite bounds hold only in the limit and are
    reported but never checked against a finite row.
    """

    name: str
    sense: str  # "upper" or "lower"
    value: Fraction
    unit: str = "density"
    finite: bool = True

    def __post_init__(self):
        if self.sense not in ("upper", "lower"):
            raise InvalidInputError(f"bound sense must be upper or lower, got {self.sense!r}")
        if self.unit not in ("density", "count"):
            raise InvalidInputError(f"bound unit must be density or count, got {self.unit!r}")
        object.__setattr__(self, "value", Fraction(self.value))

    def as_density(self, total: int) -> Fraction:
        return self.value if self.unit == "density" else self.value / total


@dataclass(frozen=True)
class DensityRecord:
    """One row of an evidence table.

    ``sense`` says whether ``value`` is a maximum (ex numbers; an unfinished
    search gives a lower bound, shown "≥") or a minimum (transversals; shown "≤").
    A ``None`` value marks a row skipped for size.
    """

    problem: str
    n: int
    value: Optional[int]
    is_exact: bool
    total: int
    bounds: tuple[Bound, ...] = ()
    sense: str = "max"
    note: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.value is not None and not 0 <= self.value <= self.total:
            raise InvalidInputError(f"value {self.value} outside [0, {self.total}]")
        if self.sense not in ("max", "min"):
            raise InvalidInputError(f"sense must be max or min, got {self.sense!r}")
        object.__setattr__(self, "bounds", tuple(self.bounds))

    @property
    def ratio(self) -> Optional[Fraction]:
        return None if self.value is None else Fraction(self.value, self.total)

    @property
    def skipped(self) -> bool:
        return self.value is None

    def display_value(self) -> str:
        if self.value is None:
            return "skipped"
        if self.is_exact:
            return str(self.value)
        return ("≥" if self.sense == "max" else "≤") + str(self.value)
