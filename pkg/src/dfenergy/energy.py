"""Per-iteration energy models and power profiles.

An always-active actor burns execution power while firing and idle power
for the rest of the period.  A self-powered actor pays wake-up and shutdown
overheads around each firing and sleeps at its dormant power in between.
Energies are exact rationals so dominance comparisons never depend on
floating-point rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import PeriodTooShortError
from .graph import ActorSpec, DecisionVector, MarkedGraph


class SegmentKind(str, enum.Enum):
    WAKEUP = "wakeup"
    EXECUTION = "execution"
    SHUTDOWN = "shutdown"
    SLEEP = "sleep"
    IDLE = "idle"


@dataclass(frozen=True)
class ProfileSegment:
    """One constant-power phase of an actor's period."""

    kind: SegmentKind
    duration: Fraction
    power: Fraction

    @property
    def energy(self) -> Fraction:
        return self.duration * self.power


def energy_always_active(actor: ActorSpec, period: Fraction) -> Fraction:
    """Energy per iteration when the actor never powers down."""
    period = Fraction(period)
    if period < actor.exec_time:
        raise PeriodTooShortError(actor.name, actor.exec_time, period)
    p = actor.power
    return p.execution * actor.exec_time + p.idle * (period - actor.exec_time)


def energy_self_powered(actor: ActorSpec, period: Fraction) -> Fraction:
    """Energy per iteration when the actor sleeps outside its firing window."""
    period = Fraction(period)
    busy = actor.wakeup_delay + actor.exec_time + actor.shutdown_delay
    if period < busy:
        raise PeriodTooShortError(actor.name, busy, period)
    p = actor.power
    return (
        p.wakeup * actor.wakeup_delay
        + p.execution * actor.exec_time
        + p.shutdown * actor.shutdown_delay
        + p.sleep * (period - busy)
    )


def total_energy(g: MarkedGraph, period: Fraction, x: DecisionVector) -> Fraction:
    """Energy per period of the whole graph under configuration x."""
    total = Fraction(0)
    for actor in g.actors:
        if x[actor.group]:
            total += energy_self_powered(actor, period)
        else:
            total += energy_always_active(actor, period)
    return total


def power_profile(
    actor: ActorSpec,
    self_powered: bool,
    period: Fraction,
    start: Fraction = Fraction(0),
) -> tuple[ProfileSegment, ...]:
    """Constant-power segments tiling one period [start, start + period).

    The profile is anchored at fireability: a self-powered actor starts its
    wake-up at ``start`` and executes afterwards.  Zero-duration segments
    are omitted.  The segments' energies sum exactly to the closed-form
    per-iteration energy of the chosen mode.
    """
    period = Fraction(period)
    start = Fraction(start)
    p = actor.power
    if self_powered:
        busy = actor.wakeup_delay + actor.exec_time + actor.shutdown_delay
        if period < busy:
            raise PeriodTooShortError(actor.name, busy, period)
        raw = [
            (SegmentKind.WAKEUP, Fraction(actor.wakeup_delay), p.wakeup),
            (SegmentKind.EXECUTION, Fraction(actor.exec_time), p.execution),
            (SegmentKind.SHUTDOWN, Fraction(actor.shutdown_delay), p.shutdown),
            (SegmentKind.SLEEP, period - busy, p.sleep),
        ]
    else:
        if period < actor.exec_time:
            raise PeriodTooShortError(actor.name, actor.exec_time, period)
        raw = [
            (SegmentKind.EXECUTION, Fraction(actor.exec_time), p.execution),
            (SegmentKind.IDLE, period - actor.exec_time, p.idle),
        ]
    return tuple(
        ProfileSegment(kind, duration, power)
        for kind, duration, power in raw
        if duration > 0
    )
