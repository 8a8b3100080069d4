"""Marked graphs, SDF graphs and the unrolling between them.

A :class:`MarkedGraph` is the analysis substrate: every actor consumes and
produces exactly one token per channel per firing.  Rate-annotated
:class:`SdfGraph` instances are unrolled into marked graphs via the
repetition vector; instances of the same SDF actor share one decision group
(and one hardware resource), so the mode design space stays ``2**|SDF actors|``
after unrolling.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .errors import (
    AnnotationError,
    InconsistentRatesError,
    InstanceCapError,
)

DEFAULT_INSTANCE_CAP = 1_000_000


@dataclass(frozen=True)
class PowerParams:
    """Per-phase power draw of one actor (abstract power units).

    ``execution``/``idle`` apply to always-active operation; ``wakeup``,
    ``shutdown`` and ``sleep`` to self-powered operation.
    """

    execution: Fraction
    idle: Fraction
    shutdown: Fraction
    wakeup: Fraction
    sleep: Fraction

    def __post_init__(self):
        for name in ("execution", "idle", "shutdown", "wakeup", "sleep"):
            value = Fraction(getattr(self, name))
            if value < 0:
                raise ValueError(f"power {name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)

    def scaled(self, factor: Fraction | int) -> "PowerParams":
        f = Fraction(factor)
        return PowerParams(
            execution=self.execution * f,
            idle=self.idle * f,
            shutdown=self.shutdown * f,
            wakeup=self.wakeup * f,
            sleep=self.sleep * f,
        )


def lint_power_ordering(name: str, power: PowerParams) -> list[str]:
    """Advisory check: sleep <= idle <= execution power.

    Violations are legal inputs (the models stay well defined) but usually
    indicate a data-entry mistake, so they are reported as lint strings
    rather than raised.
    """
    notes = []
    if power.sleep > power.idle:
        notes.append(f"actor {name!r}: sleep power {power.sleep} > idle power {power.idle}")
    if power.idle > power.execution:
        notes.append(f"actor {name!r}: idle power {power.idle} > execution power {power.execution}")
    return notes


@dataclass(frozen=True)
class ActorSpec:
    """One marked-graph actor with timing and power annotations.

    ``index`` is the dense id (position in the owning graph), ``group`` the
    decision-group index whose bit selects always-active vs self-powered.
    """

    index: int
    name: str
    exec_time: int
    wakeup_delay: int
    shutdown_delay: int
    power: PowerParams
    group: int

    def __post_init__(self):
        if self.exec_time < 0 or self.wakeup_delay < 0 or self.shutdown_delay < 0:
            raise ValueError(f"actor {self.name!r}: delays must be >= 0")


@dataclass(frozen=True)
class Channel:
    """Directed FIFO edge with a number of initial tokens."""

    src: int
    dst: int
    tokens: int = 0

    def __post_init__(self):
        if self.tokens < 0:
            raise ValueError("initial tokens must be >= 0")


@dataclass(frozen=True)
class MarkedGraph:
    actors: tuple[ActorSpec, ...]
    channels: tuple[Channel, ...]
    groups: int

    def __post_init__(self):
        object.__setattr__(self, "actors", tuple(self.actors))
        object.__setattr__(self, "channels", tuple(self.channels))
        n = len(self.actors)
        for position, actor in enumerate(self.actors):
            if actor.index != position:
                raise ValueError(
                    f"actor ids must be dense 0..{n - 1}; "
                    f"found id {actor.index} at position {position}"
                )
            if not 0 <= actor.group < self.groups:
                raise ValueError(
                    f"actor {actor.name!r}: group {actor.group} out of range "
                    f"(graph has {self.groups} groups)"
                )
        for channel in self.channels:
            if not (0 <= channel.src < n and 0 <= channel.dst < n):
                raise ValueError(f"channel {channel} references unknown actors")

    def __len__(self) -> int:
        return len(self.actors)

    def out_channels(self) -> list[list[tuple[int, Channel]]]:
        """Adjacency as (channel index, channel) lists per source actor."""
        adj: list[list[tuple[int, Channel]]] = [[] for _ in self.actors]
        for idx, channel in enumerate(self.channels):
            adj[channel.src].append((idx, channel))
        return adj


def marked_graph(actors: list[ActorSpec], channels: list[Channel]) -> MarkedGraph:
    """Build a directly-authored marked graph: each actor is its own group."""
    return MarkedGraph(tuple(actors), tuple(channels), groups=len(actors))


@dataclass(frozen=True)
class DecisionVector:
    """One mode bit per decision group: 0 = always-active, 1 = self-powered."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("decision bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def zeros(cls, n: int) -> "DecisionVector":
        return cls((0,) * n)

    @classmethod
    def ones(cls, n: int) -> "DecisionVector":
        return cls((1,) * n)

    @classmethod
    def from_string(cls, text: str) -> "DecisionVector":
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"decision vector must be a 0/1 string, got {text!r}")
        return cls(tuple(int(c) for c in text))

    def with_bit(self, i: int, value: int) -> "DecisionVector":
        bits = list(self.bits)
        bits[i] = int(value)
        return DecisionVector(tuple(bits))

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def ones_count(self) -> int:
        return sum(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i]

    def __len__(self) -> int:
        return len(self.bits)


# ---------------------------------------------------------------------------
# SDF graphs


@dataclass(frozen=True)
class SdfActor:
    """Rate-level actor; annotations may be absent until augmentation."""

    name: str
    exec_time: int | None = None
    wakeup_delay: int = 0
    shutdown_delay: int = 0
    power: PowerParams | None = None


@dataclass(frozen=True)
class SdfChannel:
    src: int
    dst: int
    production: int
    consumption: int
    tokens: int = 0

    def __post_init__(self):
        if self.production < 1 or self.consumption < 1:
            raise ValueError("SDF rates must be >= 1")
        if self.tokens < 0:
            raise ValueError("initial tokens must be >= 0")


@dataclass(frozen=True)
class SdfGraph:
    actors: tuple[SdfActor, ...]
    channels: tuple[SdfChannel, ...]

    def __post_init__(self):
        object.__setattr__(self, "actors", tuple(self.actors))
        object.__setattr__(self, "channels", tuple(self.channels))
        n = len(self.actors)
        for channel in self.channels:
            if not (0 <= channel.src < n and 0 <= channel.dst < n):
                raise ValueError(f"channel {channel} references unknown actors")

    def actor_index(self, name: str) -> int:
        for i, actor in enumerate(self.actors):
            if actor.name == name:
                return i
        raise KeyError(name)

    def with_annotations(self, annotated: list[SdfActor]) -> "SdfGraph":
        return replace(self, actors=tuple(annotated))


def repetition_vector(sdf: SdfGraph) -> tuple[int, ...]:
    """Componentwise-minimal positive solution of the balance equations.

    For every channel (a, b): q[a] * production == q[b] * consumption.
    Raises :class:`InconsistentRatesError` when no positive solution exists.
    """
    n = len(sdf.actors)
    if n == 0:
        raise InconsistentRatesError("graph has no actors")
    adjacency: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    for ch in sdf.channels:
        ratio = Fraction(ch.production, ch.consumption)  # q[dst] = ratio * q[src]
        adjacency[ch.src].append((ch.dst, ratio))
        adjacency[ch.dst].append((ch.src, 1 / ratio))

    q: list[Fraction | None] = [None] * n
    for root in range(n):
        if q[root] is not None:
            continue
        q[root] = Fraction(1)
        component = [root]
        stack = [root]
        while stack:
            u = stack.pop()
            for v, ratio in adjacency[u]:
                expected = q[u] * ratio
                if q[v] is None:
                    q[v] = expected
                    component.append(v)
                    stack.append(v)
                elif q[v] != expected:
                    raise InconsistentRatesError(
                        f"balance equations conflict at actor "
                        f"{sdf.actors[v].name!r}: {q[v]} vs {expected}"
                    )
        # Scale the component to the minimal positive integer solution.
        denominator_lcm = 1
        for v in component:
            d = q[v].denominator
            denominator_lcm = denominator_lcm * d // gcd(denominator_lcm, d)
        numerators = [q[v] * denominator_lcm for v in component]
        common = 0
        for value in numerators:
            common = gcd(common, value.numerator)
        for v, value in zip(component, numerators):
            q[v] = Fraction(value.numerator // common)
    return tuple(int(value) for value in q)


@dataclass(frozen=True)
class UnrollResult:
    graph: MarkedGraph
    instance_map: tuple[int, ...]  # instance index -> SDF actor index


def unroll(sdf: SdfGraph, instance_cap: int = DEFAULT_INSTANCE_CAP) -> UnrollResult:
    """Expand an SDF graph into an equivalent marked graph.

    Instance k of actor a inherits a's timing/power annotations and decision
    group a.  Data-dependency edges follow FIFO token bookkeeping: the n-th
    firing of a consumer may start only once the producer firings providing
    its tokens have finished, with initial tokens consumed first.  Edges
    whose producing firing lies u periods earlier carry u tokens.

    Consecutive firings of the same SDF actor are serialized (chain plus a
    one-token back edge) because each SDF actor maps to a single hardware
    resource; all q firings of one period share it.  For q == 1 the back
    edge degenerates to a self-loop already implied by the per-actor period
    bound and is omitted, so homogeneous graphs unroll to themselves.
    """
    q = repetition_vector(sdf)
    total = sum(q)
    if total > instance_cap:
        raise InstanceCapError(total, instance_cap)

    base: list[int] = []  # SDF actor index -> first instance id
    actors: list[ActorSpec] = []
    instance_map: list[int] = []
    for a, (actor, count) in enumerate(zip(sdf.actors, q)):
        if actor.exec_time is None or actor.power is None:
            raise AnnotationError(
                f"actor {actor.name!r} lacks timing/power annotations; "
                "augment the graph or provide a sidecar file"
            )
        base.append(len(actors))
        for k in range(count):
            name = actor.name if count == 1 else f"{actor.name}.{k}"
            actors.append(
                ActorSpec(
                    index=len(actors),
                    name=name,
                    exec_time=actor.exec_time,
                    wakeup_delay=actor.wakeup_delay,
                    shutdown_delay=actor.shutdown_delay,
                    power=actor.power,
                    group=a,
                )
            )
            instance_map.append(a)

    edges: dict[tuple[int, int], int] = {}

    def add_edge(src: int, dst: int, tokens: int):
        key = (src, dst)
        if key not in edges or tokens < edges[key]:
            edges[key] = tokens

    for ch in sdf.channels:
        qa, qb = q[ch.src], q[ch.dst]
        p, c, d0 = ch.production, ch.consumption, ch.tokens
        for k in range(1, qb + 1):
            for t in range((k - 1) * c + 1, k * c + 1):
                # Producer firing (1-based, over all periods) of token t.
                fired = -(-(t - d0) // p)  # ceil
                j = (fired - 1) % qa + 1
                periods_back = (j - fired) // qa
                add_edge(base[ch.src] + j - 1, base[ch.dst] + k - 1, periods_back)

    for a, count in enumerate(q):
        if count >= 2:
            first = base[a]
            for k in range(count - 1):
                add_edge(first + k, first + k + 1, 0)
            add_edge(first + count - 1, first, 1)

    channels = tuple(
        Channel(src, dst, tokens) for (src, dst), tokens in sorted(edges.items())
    )
    graph = MarkedGraph(tuple(actors), channels, groups=len(sdf.actors))
    return UnrollResult(graph, tuple(instance_map))


def validate_liveness(g: MarkedGraph) -> tuple[int, ...] | None:
    """Return a witness cycle carrying zero tokens, or None when live.

    A cycle is dead exactly when all its channels have zero initial tokens,
    so it suffices to search the zero-token subgraph for any directed cycle.
    """
    adjacency: list[list[int]] = [[] for _ in g.actors]
    for channel in g.channels:
        if channel.tokens == 0:
            adjacency[channel.src].append(channel.dst)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * len(g.actors)
    parent = [-1] * len(g.actors)
    for root in range(len(g.actors)):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(adjacency[root]))]
        color[root] = GRAY
        while stack:
            node, successors = stack[-1]
            advanced = False
            for nxt in successors:
                if color[nxt] == GRAY:
                    cycle = [node]
                    walk = node
                    while walk != nxt:
                        walk = parent[walk]
                        cycle.append(walk)
                    cycle.reverse()
                    return tuple(cycle)
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    parent[nxt] = node
                    stack.append((nxt, iter(adjacency[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return None
