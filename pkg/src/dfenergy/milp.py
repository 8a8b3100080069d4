"""Minimum-energy configuration for a fixed period, solved exactly.

Finds the decision vector minimizing total energy among all vectors that
admit a period-P schedule.  The search is a branch and bound over decision
groups: the bound sums each undecided group's cheaper mode, and a branch
dies once even its least-constraining completion (all undecided groups
always-active) cannot be scheduled.  Both tests are exact, so the returned
optimum provably covers the whole 2**groups space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .energy import energy_always_active, energy_self_powered, total_energy
from .errors import InfeasibleError, PeriodTooShortError
from .graph import DecisionVector, MarkedGraph
from .timing import Schedule, min_period, schedule_for


@dataclass(frozen=True)
class MinEnergyResult:
    config: DecisionVector
    schedule: Schedule
    energy: Fraction


class PeriodOracle:
    """Caches exact minimum periods per decision vector for one graph.

    Raising a decision bit never lowers the minimum period, so feasibility
    of a partial assignment's all-active completion both prunes soundly and
    is worth caching: sweeps re-query the same bit sets across many periods.
    """

    def __init__(self, g: MarkedGraph):
        self.graph = g
        self._cache: dict[tuple[int, ...], Fraction] = {}

    def min_period(self, x: DecisionVector) -> Fraction:
        try:
            return self._cache[x.bits]
        except KeyError:
            value = min_period(self.graph, x)
            self._cache[x.bits] = value
            return value

    def feasible(self, x: DecisionVector, period: Fraction) -> bool:
        return self.min_period(x) <= period


def _group_energies(
    g: MarkedGraph, period: Fraction
) -> tuple[list[Fraction], list[Fraction | None]]:
    """Per-group energy of each mode at the given period.

    The self-powered entry is None when any actor of the group cannot fit
    its wake-up/execute/shutdown window into the period, which rules the
    mode out structurally.
    """
    active: list[Fraction] = [Fraction(0)] * g.groups
    powered: list[Fraction | None] = [Fraction(0)] * g.groups
    for actor in g.actors:
        active[actor.group] += energy_always_active(actor, period)
        if powered[actor.group] is None:
            continue
        try:
            powered[actor.group] += energy_self_powered(actor, period)
        except PeriodTooShortError:
            powered[actor.group] = None
    return active, powered


def relaxation_bound(
    g: MarkedGraph, period: Fraction, partial: Sequence[int | None]
) -> Fraction:
    """Lower bound on the energy of any completion of a partial assignment.

    Decided groups contribute their chosen mode's energy; undecided groups
    contribute the cheaper of the modes valid at this period.  A decided
    mode that cannot fit the period raises :class:`PeriodTooShortError`.
    """
    period = Fraction(period)
    active, powered = _group_energies(g, period)
    bound = Fraction(0)
    for grp, choice in enumerate(partial):
        if choice is None:
            candidates = [active[grp]]
            if powered[grp] is not None:
                candidates.append(powered[grp])
            bound += min(candidates)
        elif choice:
            if powered[grp] is None:
                busy = max(
                    a.wakeup_delay + a.exec_time + a.shutdown_delay
                    for a in g.actors
                    if a.group == grp
                )
                name = next(a.name for a in g.actors if a.group == grp)
                raise PeriodTooShortError(name, busy, period)
            bound += powered[grp]
        else:
            bound += active[grp]
    return bound


def feasibility_prune(
    g: MarkedGraph, period: Fraction, partial: Sequence[int | None]
) -> bool:
    """True when some completion might be schedulable at this period.

    Tests the least-constraining completion (undecided groups always
    active); wake-up and shutdown delays only ever tighten constraints, so
    its infeasibility proves every completion infeasible.
    """
    bits = tuple(1 if choice else 0 for choice in partial)
    try:
        schedule_for(g, DecisionVector(bits), Fraction(period))
    except InfeasibleError:
        return False
    return True


def _candidate_key(energy: Fraction, bits: tuple[int, ...]):
    # Total order realizing the tie-break: lowest energy, then most
    # self-powered groups, then lexicographically smallest vector.
    return (energy, -sum(bits), bits)


def min_energy_config(
    g: MarkedGraph,
    period: Fraction,
    oracle: PeriodOracle | None = None,
) -> MinEnergyResult:
    """Energy-optimal decision vector and witness schedule at ``period``.

    Raises :class:`InfeasibleError` (with the binding cycle witness) when
    even the all-active configuration cannot sustain the period.  Among
    equal-energy optima, prefers more self-powered groups, then the
    lexicographically smallest vector.
    """
    period = Fraction(period)
    if oracle is None:
        oracle = PeriodOracle(g)
    zeros = DecisionVector.zeros(g.groups)
    if not oracle.feasible(zeros, period):
        schedule_for(g, zeros, period)  # raises with the witness cycle
        raise AssertionError("oracle and scheduler disagree")  # pragma: no cover

    active, powered = _group_energies(g, period)

    # Groups whose self-powered mode is structurally impossible stay 0.
    branchable = [grp for grp in range(g.groups) if powered[grp] is not None]
    branchable.sort(key=lambda grp: (-(abs(active[grp] - powered[grp])), grp))
    base_energy = sum(
        (active[grp] for grp in range(g.groups) if powered[grp] is None),
        Fraction(0),
    )
    # Cheapest-mode tail sums for the remaining branch depth.
    suffix_best = [Fraction(0)] * (len(branchable) + 1)
    for i in range(len(branchable) - 1, -1, -1):
        grp = branchable[i]
        suffix_best[i] = suffix_best[i + 1] + min(active[grp], powered[grp])

    best_key = None
    best_bits = None

    # Depth-first over branchable groups; cheaper mode first so good
    # incumbents arrive early.  bits carries the full assignment with
    # undecided branch groups still 0.
    stack = [(0, (0,) * g.groups, base_energy)]
    while stack:
        depth, bits, energy = stack.pop()
        if best_key is not None and energy + suffix_best[depth] > best_key[0]:
            continue
        if depth == len(branchable):
            key = _candidate_key(energy, bits)
            if best_key is None or key < best_key:
                best_key = key
                best_bits = bits
            continue
        grp = branchable[depth]
        choices = [
            (0, active[grp], bits),
            (1, powered[grp], tuple(
                b if i != grp else 1 for i, b in enumerate(bits)
            )),
        ]
        # Self-powered first when not more expensive (ties prefer more 1s).
        if powered[grp] <= active[grp]:
            choices.reverse()
        # Push in reverse so the preferred choice pops first.
        for bit, mode_energy, child_bits in reversed(choices):
            if bit and not oracle.feasible(DecisionVector(child_bits), period):
                continue
            stack.append((depth + 1, child_bits, energy + mode_energy))

    assert best_bits is not None  # zeros completion is always reachable
    config = DecisionVector(best_bits)
    schedule = schedule_for(g, config, period)
    energy = total_energy(g, period, config)
    assert energy == best_key[0]
    return MinEnergyResult(config, schedule, energy)
