"""Exploration strategies over the period/energy objective space.

Three strategies populate the space of (period, energy, configuration)
points: an exhaustive sweep over all decision vectors, a sweep over integer
periods solving a minimum-energy configuration each, and the hop-and-skip
loop that alternates a minimum-energy solve at the current period (hop)
with a jump down to that configuration's true minimum period (skip),
then steps below it by a user-chosen decrement.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Sequence

from .energy import total_energy
from .errors import TooManyGroupsError
from .graph import DecisionVector, MarkedGraph
from .milp import PeriodOracle, min_energy_config
from .stats import SolverStats
from .timing import min_period

DEFAULT_GROUP_CAP = 24
DEFAULT_EPSILON = Fraction(1, 10)


@dataclass(frozen=True)
class ExploredPoint:
    """One evaluated design: period, energy and the configuration behind it.

    ``endpoint`` marks the synthetic all-active extreme the period sweep
    emits when the minimum period is not an integer; all other points come
    from the strategies' regular loops.
    """

    period: Fraction
    energy: Fraction
    config: DecisionVector
    endpoint: bool = False


@dataclass(frozen=True)
class Front:
    """Non-dominated points, strictly increasing period, strictly
    decreasing energy."""

    points: tuple[ExploredPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        for a, b in zip(self.points, self.points[1:]):
            if not (a.period < b.period and a.energy > b.energy):
                raise ValueError(
                    f"front must strictly trade period for energy: "
                    f"({a.period}, {a.energy}) then ({b.period}, {b.energy})"
                )

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def objectives(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple((p.period, p.energy) for p in self.points)


def _preference(point: ExploredPoint):
    # Among equal (period, energy): most self-powered groups, then
    # lexicographically smallest configuration.
    return (-point.config.ones_count(), point.config.bits)


def pareto_filter(points: Iterable[ExploredPoint]) -> Front:
    """Minimal non-dominated subset under componentwise <= on (P, E).

    Points sharing (P, E) collapse to the preferred configuration.
    """
    by_objective: dict[tuple[Fraction, Fraction], ExploredPoint] = {}
    for point in points:
        key = (point.period, point.energy)
        held = by_objective.get(key)
        if held is None or _preference(point) < _preference(held):
            by_objective[key] = point
    kept: list[ExploredPoint] = []
    best_energy: Fraction | None = None
    for key in sorted(by_objective):
        point = by_objective[key]
        if best_energy is None or point.energy < best_energy:
            kept.append(point)
            best_energy = point.energy
    return Front(tuple(kept))


def _all_configs(groups: int) -> Iterable[DecisionVector]:
    for bits in itertools.product((0, 1), repeat=groups):
        yield DecisionVector(bits)


def _configs_chunk(args) -> list[ExploredPoint]:
    g, chunk = args
    points = []
    for bits in chunk:
        x = DecisionVector(bits)
        period = min_period(g, x)
        points.append(ExploredPoint(period, total_energy(g, period, x), x))
    return points


def explore_configs(
    g: MarkedGraph,
    cap: int = DEFAULT_GROUP_CAP,
    workers: int = 1,
    stats: SolverStats | None = None,
) -> tuple[ExploredPoint, ...]:
    """Exhaustive sweep: one point per decision vector at its own minimum
    period.  The non-dominated subset of the result is the true Pareto
    front.  Refuses graphs with more than ``cap`` groups."""
    if g.groups > cap:
        raise TooManyGroupsError(
            f"{g.groups} decision groups means 2**{g.groups} configurations; "
            f"cap is {cap} (try the hop-and-skip strategy)"
        )
    stats = stats if stats is not None else SolverStats()
    all_bits = [x.bits for x in _all_configs(g.groups)]
    stats.lp_calls += len(all_bits)
    if workers > 1 and len(all_bits) > 1:
        size = max(1, -(-len(all_bits) // (workers * 4)))
        chunks = [all_bits[i : i + size] for i in range(0, len(all_bits), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_configs_chunk, [(g, c) for c in chunks])
        points = [p for chunk in results for p in chunk]
    else:
        points = _configs_chunk((g, all_bits))
    return tuple(points)


def _periods_chunk(args) -> list[ExploredPoint]:
    g, periods = args
    oracle = PeriodOracle(g)
    points = []
    for p in periods:
        result = min_energy_config(g, Fraction(p), oracle)
        points.append(ExploredPoint(Fraction(p), result.energy, result.config))
    return points


def explore_periods(
    g: MarkedGraph,
    workers: int = 1,
    stats: SolverStats | None = None,
) -> tuple[ExploredPoint, ...]:
    """Sweep every integer period between the all-active minimum and the
    all-powered maximum, taking the minimum-energy configuration at each.

    Integer periods can miss optima whose critical cycle mean is a proper
    fraction; when the minimum period itself is fractional, the all-active
    extreme is additionally emitted, flagged as ``endpoint``, so the sweep
    never returns an empty result.
    """
    stats = stats if stats is not None else SolverStats()
    zeros = DecisionVector.zeros(g.groups)
    ones = DecisionVector.ones(g.groups)
    p_min = min_period(g, zeros)
    p_max = min_period(g, ones)
    stats.lp_calls += 2

    points: list[ExploredPoint] = []
    if p_min.denominator != 1:
        points.append(
            ExploredPoint(p_min, total_energy(g, p_min, zeros), zeros, endpoint=True)
        )
    periods = list(range(ceil(p_min), floor(p_max) + 1))
    stats.milp_calls += len(periods)
    if workers > 1 and len(periods) > 1:
        size = max(1, -(-len(periods) // (workers * 4)))
        chunks = [periods[i : i + size] for i in range(0, len(periods), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_periods_chunk, [(g, c) for c in chunks])
        for chunk in results:
            points.extend(chunk)
    else:
        points.extend(_periods_chunk((g, periods)))
    return tuple(points)


def explore_hop_skip(
    g: MarkedGraph,
    epsilon: Fraction = DEFAULT_EPSILON,
    stats: SolverStats | None = None,
) -> tuple[ExploredPoint, ...]:
    """Hop-and-skip exploration with decrement ``epsilon``.

    Starting from the all-powered maximum period, each iteration hops to
    the minimum-energy configuration sustaining the current period, skips
    down to that configuration's own minimum period, records the point
    there, and continues epsilon below it until passing the all-active
    minimum period.  Points repeating the same (period, configuration)
    are recorded once.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    stats = stats if stats is not None else SolverStats()
    oracle = PeriodOracle(g)
    zeros = DecisionVector.zeros(g.groups)
    ones = DecisionVector.ones(g.groups)
    p_min = oracle.min_period(zeros)
    p_max = oracle.min_period(ones)
    stats.lp_calls += 2

    points: dict[tuple[Fraction, tuple[int, ...]], ExploredPoint] = {}
    period = p_max
    while period >= p_min:
        result = min_energy_config(g, period, oracle)
        stats.milp_calls += 1
        settled = oracle.min_period(result.config)
        stats.lp_calls += 1
        key = (settled, result.config.bits)
        if key not in points:
            points[key] = ExploredPoint(
                settled, total_energy(g, settled, result.config), result.config
            )
        period = settled - epsilon
    return tuple(points.values())
