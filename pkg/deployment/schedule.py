"""
Single-Group Schedules

A schedule is the walk of the one moving group of non-settled agents,
starting at the start vertex. Splitting the group never helps, so this walk
is the whole strategy.

This module:
1. Represents schedules and their JSON file format
2. Counts the agents a schedule needs (simulation of curr/add)
3. Checks coverage and the return condition
4. Replays a schedule with a fixed number of agents

Counting rules:
- curr starts at N, add at 0; the start vertex is the first element visited
- crossing edge e: if curr < w_e then add += w_e - curr and curr = w_e
- first visit of v: if curr < w_v then add += w_v - curr and curr = 0,
  otherwise curr -= w_v; revisits are free
- the total is N + add; for the return variant the group coming home must be
  nonempty, so a walk ending with curr = 0 costs one more agent

Usage:
    count = count_agents(instance, schedule)
    report = verify_coverage(instance, schedule)
    if report.accepted and replay_fixed(instance, schedule, count.total).feasible:
        ...
"""

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional
import json
import logging

from deployment.models import DeploymentError, FormatError, Instance, Variant

logger = logging.getLogger(__name__)


class ScheduleError(DeploymentError):
    """Base exception for malformed schedules."""
    pass


class WalkError(ScheduleError):
    """Raised when a step does not follow an incident edge."""
    pass


class StartMismatchError(ScheduleError):
    """Raised when the schedule starts somewhere other than v_s."""
    pass


# =============================================================================
# Models
# =============================================================================

@dataclass(frozen=True)
class Step:
    """Cross `edge` and arrive at `to`."""
    edge: str
    to: str

    def to_dict(self) -> dict[str, str]:
        return {"edge": self.edge, "to": self.to}


@dataclass(frozen=True)
class Schedule:
    """
    A walk from `start` as a list of steps.

    Example:
        >>> s = Schedule.create("v1", [("e1", "v2"), ("e2", "v3")])
        >>> s.vertices()
        ['v1', 'v2', 'v3']
    """
    start: str
    steps: tuple[Step, ...] = ()

    @classmethod
    def create(cls, start: str, steps: list[tuple[str, str]]) -> "Schedule":
        return cls(start=start, steps=tuple(Step(edge, to) for edge, to in steps))

    def vertices(self) -> list[str]:
        """Start followed by every arrival vertex."""
        return [self.start] + [step.to for step in self.steps]

    @property
    def end(self) -> str:
        return self.steps[-1].to if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict[str, Any]:
        return {"start": self.start, "steps": [s.to_dict() for s in self.steps]}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Schedule":
        if not isinstance(data, Mapping) or set(data) != {"start", "steps"}:
            raise FormatError("schedule must be an object with exactly 'start' and 'steps'")
        if not isinstance(data["start"], str) or not isinstance(data["steps"], list):
            raise FormatError("schedule 'start' must be a string and 'steps' a list")
        steps = []
        for i, item in enumerate(data["steps"]):
            if not isinstance(item, Mapping) or set(item) != {"edge", "to"}:
                raise FormatError(f"steps[{i}] must be an object with exactly 'edge' and 'to'")
            if not isinstance(item["edge"], str) or not isinstance(item["to"], str):
                raise FormatError(f"steps[{i}]: 'edge' and 'to' must be strings")
            steps.append(Step(item["edge"], item["to"]))
        return cls(start=data["start"], steps=tuple(steps))


@dataclass(frozen=True)
class AgentCount:
    """
    Result of counting a schedule.

    Attributes:
        total: N + add
        add: Agents needed beyond the total demand
        final_unsettled: curr after the last step
        trace: (curr, add) after the start vertex and after every step
    """
    total: int
    add: int
    final_unsettled: int
    trace: tuple[tuple[int, int], ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class CoverageReport:
    """Coverage verdict of a schedule for one variant."""
    variant: Variant
    covered: bool
    ends_at_start: bool
    missing: tuple[str, ...] = ()

    @property
    def accepted(self) -> bool:
        if self.variant is Variant.RETURN:
            return self.covered and self.ends_at_start
        return self.covered


@dataclass(frozen=True)
class ReplayVerdict:
    """Outcome of walking a schedule with a fixed number of agents."""
    feasible: bool
    failed_step: Optional[int] = None   # 0 is the start vertex, i is steps[i-1]
    reason: str = ""


# =============================================================================
# Operations
# =============================================================================

def count_agents(
    instance: Instance,
    schedule: Schedule,
    variant: Optional[Variant] = None,
) -> AgentCount:
    """
    Number of agents the schedule needs.

    Args:
        instance: The instance walked on
        schedule: A walk starting at instance.start
        variant: Overrides instance.variant for the nonempty-return rule

    Raises:
        StartMismatchError, WalkError
    """
    variant = variant or instance.variant
    weights = dict(instance.weight_of)
    curr = instance.total_demand
    add = 0
    trace = []

    _check_start(instance, schedule)
    curr, add = _settle(curr, add, weights, schedule.start)
    trace.append((curr, add))

    position = schedule.start
    for i, step in enumerate(schedule.steps):
        edge = _follow(instance, position, step, i)
        if curr < edge.weight:
            add += edge.weight - curr
            curr = edge.weight
        curr, add = _settle(curr, add, weights, step.to)
        position = step.to
        trace.append((curr, add))

    if variant is Variant.RETURN and curr == 0:
        add += 1
        curr = 1
        trace[-1] = (curr, add)

    return AgentCount(
        total=instance.total_demand + add,
        add=add,
        final_unsettled=curr,
        trace=tuple(trace),
    )


def verify_coverage(
    instance: Instance,
    schedule: Schedule,
    variant: Optional[Variant] = None,
) -> CoverageReport:
    """Report whether every vertex is visited and whether the walk ends at v_s."""
    variant = variant or instance.variant
    visited = set(schedule.vertices())
    missing = tuple(sorted(v.id for v in instance.vertices if v.id not in visited))
    return CoverageReport(
        variant=variant,
        covered=not missing,
        ends_at_start=schedule.end == instance.start,
        missing=missing,
    )


def replay_fixed(
    instance: Instance,
    schedule: Schedule,
    k: int,
    variant: Optional[Variant] = None,
) -> ReplayVerdict:
    """
    Walk the schedule with exactly k agents.

    Feasible iff k covers the total demand, every crossing has at least w_e
    unsettled agents, every first visit finds at least w_v, and (return
    variant) at least one agent is still unsettled at the end.
    Equivalent to k >= count_agents(...).total.
    """
    variant = variant or instance.variant
    _check_start(instance, schedule)

    if k < instance.total_demand:
        return ReplayVerdict(False, 0, f"{k} agents cannot cover total demand {instance.total_demand}")

    weights = dict(instance.weight_of)
    unsettled = k
    if unsettled < weights[schedule.start]:
        return ReplayVerdict(False, 0, f"cannot settle start '{schedule.start}'")
    unsettled -= weights[schedule.start]
    weights[schedule.start] = 0

    position = schedule.start
    for i, step in enumerate(schedule.steps, start=1):
        edge = _follow(instance, position, step, i - 1)
        if unsettled < edge.weight:
            return ReplayVerdict(
                False, i, f"{unsettled} unsettled agents cannot cross '{edge.id}' (weight {edge.weight})"
            )
        if unsettled < weights[step.to]:
            return ReplayVerdict(False, i, f"{unsettled} unsettled agents cannot settle '{step.to}'")
        unsettled -= weights[step.to]
        weights[step.to] = 0
        position = step.to

    if variant is Variant.RETURN and unsettled < 1:
        return ReplayVerdict(False, len(schedule.steps), "no agent is left to return")
    return ReplayVerdict(True)


def parse_schedule(text: str) -> Schedule:
    """Parse the JSON schedule format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None
    return Schedule.from_dict(data)


def serialize_schedule(schedule: Schedule) -> str:
    return json.dumps(schedule.to_dict(), indent=2)


# =============================================================================
# Helpers
# =============================================================================

def _check_start(instance: Instance, schedule: Schedule) -> None:
    if schedule.start != instance.start:
        raise StartMismatchError(
            f"schedule starts at '{schedule.start}' but the instance starts at '{instance.start}'"
        )


def _follow(instance: Instance, position: str, step: Step, index: int):
    edge = instance.edge_by_id.get(step.edge)
    if edge is None:
        raise WalkError(f"step {index}: unknown edge '{step.edge}'")
    if position not in (edge.u, edge.v):
        raise WalkError(f"step {index}: edge '{edge.id}' is not incident to '{position}'")
    if edge.other(position) != step.to:
        raise WalkError(
            f"step {index}: edge '{edge.id}' from '{position}' arrives at '{edge.other(position)}', "
            f"not '{step.to}'"
        )
    return edge


def _settle(curr: int, add: int, weights: dict[str, int], vertex: str) -> tuple[int, int]:
    demand = weights[vertex]
    if curr < demand:
        add += demand - curr
        curr = 0
    else:
        curr -= demand
    weights[vertex] = 0
    return curr, add
