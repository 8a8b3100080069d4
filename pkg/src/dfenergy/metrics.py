"""Front quality: normalization, hypervolume, hypervolume ratio.

Both objectives (period, energy) are minimized.  Fronts are first mapped
into the unit square using a shared normalization box; the hypervolume is
the exact measure of the region of the square weakly dominated by the
front, with the reference corner at (1, 1).  Equal dominated regions give
ratio one, which decides front equality exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .dse import ExploredPoint, Front
from .errors import DegenerateFrontError, OutOfBoxError

Point2 = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class NormalizationBox:
    """Per-objective bounds; zero maps to the best value ever seen, one to
    the worst."""

    period_min: Fraction
    period_max: Fraction
    energy_min: Fraction
    energy_max: Fraction

    def __post_init__(self):
        if self.period_min > self.period_max or self.energy_min > self.energy_max:
            raise ValueError("normalization box must have min <= max per objective")

    @classmethod
    def around(cls, *fronts: Iterable[ExploredPoint]) -> "NormalizationBox":
        """Bounds over the union of the given fronts."""
        periods: list[Fraction] = []
        energies: list[Fraction] = []
        for front in fronts:
            for point in front:
                periods.append(point.period)
                energies.append(point.energy)
        if not periods:
            raise ValueError("cannot build a normalization box from empty fronts")
        return cls(min(periods), max(periods), min(energies), max(energies))


def _scale(value: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    if not lo <= value <= hi:
        raise OutOfBoxError(f"value {value} outside [{lo}, {hi}]")
    if lo == hi:
        return Fraction(0)
    return (value - lo) / (hi - lo)


def normalize(
    front: Iterable[ExploredPoint], box: NormalizationBox
) -> tuple[Point2, ...]:
    """Map a front into the unit square using the given box."""
    return tuple(
        (
            _scale(point.period, box.period_min, box.period_max),
            _scale(point.energy, box.energy_min, box.energy_max),
        )
        for point in front
    )


def hypervolume(points: Iterable[Point2]) -> Fraction:
    """Exact measure of the region of the unit square weakly dominated by
    the points.  Input order does not matter; dominated or duplicate points
    contribute nothing."""
    staircase: list[Point2] = []
    best_y: Fraction | None = None
    for x, y in sorted(set(points)):
        if not (0 <= x <= 1 and 0 <= y <= 1):
            raise OutOfBoxError(f"point ({x}, {y}) outside the unit square")
        if best_y is None or y < best_y:
            staircase.append((x, y))
            best_y = y
    volume = Fraction(0)
    for i, (x, y) in enumerate(staircase):
        next_x = staircase[i + 1][0] if i + 1 < len(staircase) else Fraction(1)
        volume += (next_x - x) * (1 - y)
    return volume


def hypervolume_ratio(
    approx: Front | Iterable[ExploredPoint],
    reference: Front | Iterable[ExploredPoint],
    box: NormalizationBox | None = None,
) -> Fraction:
    """Quality of ``approx`` relative to ``reference``.

    Both fronts are normalized with one shared box (by default the bounds
    of their union, matching how competing explorations are compared).
    The ratio never exceeds one and equals one exactly when both fronts
    dominate the same region.
    """
    approx = tuple(approx)
    reference = tuple(reference)
    if box is None:
        box = NormalizationBox.around(approx, reference)
    ref_volume = hypervolume(normalize(reference, box))
    if ref_volume == 0:
        raise DegenerateFrontError(
            "reference front has zero hypervolume; ratio undefined"
        )
    return hypervolume(normalize(approx, box)) / ref_volume
