"""Exception taxonomy shared across the package.

Analysis errors carry structured witnesses (cycles, actors) so callers can
report them; the CLI maps them onto exit codes.
"""

from __future__ import annotations


class DataflowError(Exception):
    """Base class for all errors raised by this package."""


class InconsistentRatesError(DataflowError):
    """The SDF balance equations admit no positive repetition vector."""


class InstanceCapError(DataflowError):
    """Unrolling would create more actor instances than the configured cap."""

    def __init__(self, total: int, cap: int):
        super().__init__(f"unrolled graph needs {total} instances, cap is {cap}")
        self.total = total
        self.cap = cap


class AnnotationError(DataflowError):
    """An actor is missing the timing/power annotations the analysis needs."""


class DeadlockError(DataflowError):
    """A directed cycle without any initial token was found."""

    def __init__(self, cycle: tuple[int, ...]):
        super().__init__(f"token-free cycle through actors {list(cycle)}")
        self.cycle = cycle


class InfeasibleError(DataflowError):
    """No schedule with the requested period exists.

    ``cycle`` is the witness: the actor ids of a cycle (or the single actor
    whose self bound is violated) whose constraints cannot be met.
    """

    def __init__(self, cycle: tuple[int, ...], message: str | None = None):
        super().__init__(message or f"period violated by cycle {list(cycle)}")
        self.cycle = cycle


class PeriodTooShortError(DataflowError):
    """The period is below an actor's minimum busy time for its mode."""

    def __init__(self, actor: str, needed, got):
        super().__init__(f"actor {actor!r} needs period >= {needed}, got {got}")
        self.actor = actor
        self.needed = needed
        self.got = got


class DimensionMismatchError(DataflowError):
    """A decision vector's length does not match the graph's group count."""


class TooManyGroupsError(DataflowError):
    """The exhaustive configuration sweep was asked to cover too many groups."""


class OutOfBoxError(DataflowError):
    """A point lies outside its normalization box."""


class DegenerateFrontError(DataflowError):
    """The reference front has zero hypervolume, so no ratio is defined."""


class Sdf3ParseError(DataflowError):
    """Malformed or unsupported content in an SDF3-style XML file."""

    def __init__(self, message: str, context: str | None = None):
        super().__init__(f"{message} ({context})" if context else message)
        self.context = context


class UnsupportedFeatureError(Sdf3ParseError):
    """The file uses a dataflow feature outside the supported SDF subset."""


class SchemaError(DataflowError):
    """A results file does not match the expected schema."""


class GenerationFailedError(DataflowError):
    """The random graph generator gave up after its retry budget."""
