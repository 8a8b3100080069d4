"""Counters the exploration strategies report alongside their results."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class SolverStats:
    """Top-level solver invocations made by one exploration run.

    Counts period minimizations (LP-equivalent) and minimum-energy
    configuration solves (MILP-equivalent) at orchestration granularity;
    probes inside the branch-and-bound search are not counted.
    """

    lp_calls: int = 0
    milp_calls: int = 0

    def as_dict(self) -> dict[str, int]:
        return {"lp_calls": self.lp_calls, "milp_calls": self.milp_calls}
