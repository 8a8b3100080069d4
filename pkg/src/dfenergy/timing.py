"""Minimum sustainable periods and periodic schedules.

For a fixed decision vector the minimum period equals the maximum over all
directed cycles of (cycle weight / cycle tokens) and over all per-actor
period bounds, where a self-powered actor's weight includes its wake-up
delay on outgoing dependencies and its wake-up plus shutdown delay in the
per-actor bound.  All arithmetic is exact: cycle ratios are refined through
integer Bellman-Ford runs until no cycle beats the incumbent ratio, so the
result is the critical cycle's exact rational, never an approximation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DeadlockError, DimensionMismatchError, InfeasibleError
from .graph import DecisionVector, MarkedGraph, validate_liveness


@dataclass(frozen=True)
class Schedule:
    """Periodic schedule: per-actor start times repeating every ``period``.

    Start times are fireability instants; a self-powered actor begins
    executing one wake-up delay after its start time.
    """

    period: Fraction
    starts: tuple[Fraction, ...]


@dataclass(frozen=True)
class Violation:
    kind: str  # "data-dependency" or "period-bound"
    actors: tuple[int, ...]
    required: Fraction
    actual: Fraction

    def describe(self, g: MarkedGraph) -> str:
        names = ", ".join(g.actors[i].name for i in self.actors)
        return f"{self.kind} on ({names}): need {self.required}, have {self.actual}"


def effective_weights(
    g: MarkedGraph, x: DecisionVector
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Mode-dependent timing: per actor (dependency weight, period bound).

    The dependency weight delays every outgoing data edge; the period bound
    is the minimum period the actor itself can sustain.
    """
    if len(x) != g.groups:
        raise DimensionMismatchError(
            f"decision vector has {len(x)} bits, graph has {g.groups} groups"
        )
    edge_weight = []
    self_bound = []
    for actor in g.actors:
        bit = x[actor.group]
        edge_weight.append(actor.exec_time + bit * actor.wakeup_delay)
        self_bound.append(
            actor.exec_time + bit * (actor.wakeup_delay + actor.shutdown_delay)
        )
    return tuple(edge_weight), tuple(self_bound)


# ---------------------------------------------------------------------------
# Bellman-Ford engine: exact integer costs, all-zero source.


def _bellman_ford(
    node_count: int,
    edges: list[tuple[int, int, int, int]],
) -> tuple[list[int], tuple[int, ...] | None]:
    """Shortest paths from a virtual source over (src, dst, cost, id) edges.

    Returns (distances, witness): witness is a strictly negative cycle as a
    tuple of edge ids in forward order, or None when distances converged.
    Edges must be pre-sorted so relaxation order is reproducible.

    Extraction walks predecessor pointers from a node updated after full
    convergence should have happened; the walk's terminal cycle is verified
    to have negative total cost and extra relaxation rounds are run in the
    (degenerate, tie-induced) case it does not.
    """
    dist = [0] * node_count
    pred = [-1] * node_count  # edge id that last improved the node
    cost_of = {}
    src_of = {}
    dst_of = {}
    for src, dst, cost, eid in edges:
        cost_of[eid] = cost
        src_of[eid] = src
        dst_of[eid] = dst

    def run_pass() -> int:
        touched = -1
        for src, dst, cost, eid in edges:
            nd = dist[src] + cost
            if nd < dist[dst]:
                dist[dst] = nd
                pred[dst] = eid
                touched = dst
        return touched

    last = 0
    for _ in range(node_count):
        last = run_pass()
        if last == -1:
            return dist, None

    for _ in range(2 * node_count + 2):
        # `last` was updated after simple-path distances had converged, so
        # its predecessor chain must loop.
        node = last
        for _ in range(node_count):
            if pred[node] == -1:  # pragma: no cover - theory says unreachable
                break
            node = src_of[pred[node]]
        cycle_edges: list[int] = []
        seen: set[int] = set()
        walker = node
        while walker not in seen and pred[walker] != -1:
            seen.add(walker)
            eid = pred[walker]
            cycle_edges.append(eid)
            walker = src_of[eid]
        if walker in seen:
            while cycle_edges and dst_of[cycle_edges[0]] != walker:
                cycle_edges.pop(0)
            if cycle_edges and sum(cost_of[e] for e in cycle_edges) < 0:
                cycle_edges.reverse()
                return dist, tuple(cycle_edges)
        # Tight (zero-cost) predecessor loop: relax further until the truly
        # negative cycle rewrites the pointers.
        last = run_pass()
        if last == -1:  # pragma: no cover - a negative cycle keeps relaxing
            raise AssertionError("relaxation converged after cycle detection")
    raise AssertionError("negative cycle detected but not extractable")


# ---------------------------------------------------------------------------
# Maximum cycle ratio


def _strongly_connected_components(g: MarkedGraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative to survive deep chains."""
    n = len(g.actors)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for channel in g.channels:
        adjacency[channel.src].append(channel.dst)

    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components: list[list[int]] = []

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, child_pos = work.pop()
            if child_pos == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for pos in range(child_pos, len(adjacency[node])):
                nxt = adjacency[node][pos]
                if index[nxt] == -1:
                    work.append((node, pos + 1))
                    work.append((nxt, 0))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return components


def _max_cycle_ratio(g: MarkedGraph, edge_weight: tuple[int, ...]) -> Fraction | None:
    """Maximum over directed cycles of (sum of weights / sum of tokens).

    Returns None for acyclic graphs.  Requires a live graph.  Works per
    strongly connected component: a cycle beating the incumbent ratio
    num/den shows up as a negative cycle of the integer costs
    num*tokens - den*weight, and each refinement jumps to that cycle's
    exact ratio, so the loop terminates on the critical cycle itself.
    """
    best: Fraction | None = None
    for component in _strongly_connected_components(g):
        members = set(component)
        local = {node: i for i, node in enumerate(component)}
        internal = [
            (idx, ch)
            for idx, ch in enumerate(g.channels)
            if ch.src in members and ch.dst in members
        ]
        if not internal:
            continue
        internal.sort(key=lambda item: (item[1].src, item[0]))

        def cycle_ratio(edge_ids) -> Fraction:
            weight = sum(edge_weight[g.channels[e].src] for e in edge_ids)
            tokens = sum(g.channels[e].tokens for e in edge_ids)
            if tokens == 0:
                raise DeadlockError(tuple(g.channels[e].src for e in edge_ids))
            return Fraction(weight, tokens)

        # A component that is one simple cycle needs no refinement.
        out_degree = {node: 0 for node in component}
        for _, ch in internal:
            out_degree[ch.src] += 1
        if len(internal) == len(component) and all(
            d == 1 for d in out_degree.values()
        ):
            ratio = cycle_ratio([idx for idx, _ in internal])
            if best is None or ratio > best:
                best = ratio
            continue

        if best is not None:
            candidate = best
        else:
            candidate = _some_cycle_ratio(g, internal, component, edge_weight)
        while True:
            num, den = candidate.numerator, candidate.denominator
            edges = [
                (
                    local[ch.src],
                    local[ch.dst],
                    num * ch.tokens - den * edge_weight[ch.src],
                    idx,
                )
                for idx, ch in internal
            ]
            _, witness = _bellman_ford(len(component), edges)
            if witness is None:
                break
            improved = cycle_ratio(witness)
            if improved <= candidate:  # pragma: no cover - witness is strict
                raise AssertionError("cycle ratio refinement must increase")
            candidate = improved
        if best is None or candidate > best:
            best = candidate
    return best


def _some_cycle_ratio(g, internal, component, edge_weight) -> Fraction:
    """Ratio of an arbitrary cycle inside a strongly connected component."""
    adjacency: dict[int, list[tuple[int, int]]] = {node: [] for node in component}
    for idx, ch in internal:
        adjacency[ch.src].append((ch.dst, idx))
    start = component[0]
    path_edges: list[int] = []
    position: dict[int, int] = {start: 0}
    node = start
    while True:
        nxt, idx = adjacency[node][0]
        if nxt in position:
            cycle = path_edges[position[nxt]:] + [idx]
            weight = sum(edge_weight[g.channels[e].src] for e in cycle)
            tokens = sum(g.channels[e].tokens for e in cycle)
            if tokens == 0:
                raise DeadlockError(tuple(g.channels[e].src for e in cycle))
            return Fraction(weight, tokens)
        path_edges.append(idx)
        position[nxt] = len(path_edges)
        node = nxt


def min_period(g: MarkedGraph, x: DecisionVector) -> Fraction:
    """Smallest period admitting a periodic schedule under configuration x."""
    dead = validate_liveness(g)
    if dead is not None:
        raise DeadlockError(dead)
    edge_weight, self_bound = effective_weights(g, x)
    best = Fraction(max(self_bound)) if self_bound else Fraction(0)
    cycles = _max_cycle_ratio(g, edge_weight)
    if cycles is not None and cycles > best:
        best = cycles
    return best


def schedule_for(g: MarkedGraph, x: DecisionVector, period: Fraction) -> Schedule:
    """Start times for the given period, or raise :class:`InfeasibleError`.

    Solves the difference-constraint system start_j - start_i >=
    weight_i - tokens(i,j) * period by longest paths from a virtual source;
    an unbounded (positive-weight) cycle certifies infeasibility and is
    raised as the witness.  Start times are the least nonnegative solution,
    so the earliest start is 0 and the result is reproducible.
    """
    period = Fraction(period)
    if period <= 0:
        raise ValueError(f"period must be positive, got {period}")
    edge_weight, self_bound = effective_weights(g, x)
    for actor, bound in zip(g.actors, self_bound):
        if period < bound:
            raise InfeasibleError(
                (actor.index,),
                f"actor {actor.name!r} needs period >= {bound}, got {period}",
            )

    num, den = period.numerator, period.denominator
    # Longest paths computed as shortest paths on negated costs, scaled by
    # the period's denominator to stay in integers.
    ordered = sorted(enumerate(g.channels), key=lambda item: (item[1].src, item[0]))
    edges = [
        (ch.src, ch.dst, ch.tokens * num - edge_weight[ch.src] * den, idx)
        for idx, ch in ordered
    ]
    dist, witness = _bellman_ford(len(g.actors), edges)
    if witness is not None:
        actors = tuple(g.channels[e].src for e in witness)
        names = [g.actors[i].name for i in actors]
        raise InfeasibleError(
            actors, f"no schedule at period {period}: cycle through {names} violates it"
        )
    starts = [Fraction(-d, den) for d in dist]
    shift = min(starts, default=Fraction(0))
    return Schedule(period, tuple(s - shift for s in starts))


def verify_schedule(
    g: MarkedGraph,
    x: DecisionVector,
    schedule: Schedule,
    include_wakeup: bool = False,
) -> tuple[Violation, ...]:
    """Check a schedule against the graph's constraints, exactly.

    Always checked: every data dependency start_j + tokens * P >=
    start_i + exec_time_i, and every per-actor period bound
    P >= exec_time + x * (wakeup + shutdown).  With ``include_wakeup`` the
    dependency check additionally charges a self-powered producer's wake-up
    delay, i.e. the full system the schedule solver guarantees.
    Returns all violations; an empty tuple means the schedule is accepted.
    """
    if len(schedule.starts) != len(g.actors):
        raise DimensionMismatchError(
            f"schedule has {len(schedule.starts)} starts for {len(g.actors)} actors"
        )
    edge_weight, self_bound = effective_weights(g, x)
    period = Fraction(schedule.period)
    violations = []
    for actor, bound in zip(g.actors, self_bound):
        if period < bound:
            violations.append(
                Violation("period-bound", (actor.index,), Fraction(bound), period)
            )
    for ch in g.channels:
        weight = edge_weight[ch.src] if include_wakeup else g.actors[ch.src].exec_time
        lhs = schedule.starts[ch.dst] + ch.tokens * period
        rhs = schedule.starts[ch.src] + weight
        if lhs < rhs:
            violations.append(Violation("data-dependency", (ch.src, ch.dst), rhs, lhs))
    return tuple(violations)
