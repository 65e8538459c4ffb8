"""
Tests for Schedules and Agent Counting

These tests verify that:
1. The narrated introductory walk counts to 23 with 4 agents left over
2. Invalid walks are rejected with WalkError / StartMismatchError
3. Coverage and the return condition are reported per variant
4. replay_fixed agrees with count_agents, also on random walks
5. The schedule file format parses and rejects malformed input
6. Counts never drop when a weight is raised; add never decreases

Run with: pytest tests/deployment/test_schedule.py -v
"""

from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deployment.generators import figure1_schedule, random_graph
from deployment.models import FormatError, Instance, Variant
from deployment.schedule import (
    Schedule,
    StartMismatchError,
    WalkError,
    count_agents,
    parse_schedule,
    replay_fixed,
    serialize_schedule,
    verify_coverage,
)


@pytest.fixture
def single_edge():
    """s (demand 0) -- e (weight 7) -- b (demand 3)."""
    return Instance.create([("s", 0), ("b", 3)], [("e", "s", "b", 7)], "s")


# =============================================================================
# Counting
# =============================================================================

class TestCountAgents:
    """Tests for count_agents."""

    def test_figure1_walk(self, fig1):
        """The narrated walk needs 23 agents and leaves 4 unsettled at v5."""
        count = count_agents(fig1, figure1_schedule())

        assert count.total == 23
        assert count.add == 4
        assert count.final_unsettled == 4

    def test_trace_starts_after_start_vertex(self, fig1):
        """The first trace entry is after settling v1, one entry per step follows."""
        schedule = figure1_schedule()
        count = count_agents(fig1, schedule)

        assert count.trace[0] == (18, 0)
        assert len(count.trace) == len(schedule) + 1

    def test_single_edge(self, single_edge):
        """Crossing a heavy edge tops up the group."""
        count = count_agents(single_edge, Schedule.create("s", [("e", "b")]))

        assert count.total == 7
        assert count.final_unsettled == 4

    def test_empty_schedule_return(self):
        """A lone vertex with everything settled still needs one agent to report back."""
        instance = Instance.create([("s", 2)], [], "s", Variant.RETURN)

        assert count_agents(instance, Schedule(start="s")).total == 3
        assert count_agents(instance, Schedule(start="s"), Variant.NO_RETURN).total == 2

    def test_revisits_are_free(self):
        """Coming back over a settled vertex settles nothing."""
        instance = Instance.create([("s", 2), ("b", 1)], [("e", "s", "b", 0)], "s")
        there_and_back = Schedule.create("s", [("e", "b"), ("e", "s"), ("e", "b")])

        count = count_agents(instance, there_and_back)

        assert count.total == 3
        assert count.trace[-1] == (0, 0)

    def test_wrong_start(self, fig1):
        """The walk must start at v_s."""
        with pytest.raises(StartMismatchError):
            count_agents(fig1, Schedule(start="v2"))

    def test_non_incident_edge(self, fig1):
        """Each step must use an edge at the current position."""
        with pytest.raises(WalkError, match="e2"):
            count_agents(fig1, Schedule.create("v1", [("e2", "v3")]))

    def test_wrong_arrival(self, fig1):
        """The declared arrival vertex must be the edge's other end."""
        with pytest.raises(WalkError, match="v4"):
            count_agents(fig1, Schedule.create("v1", [("e1", "v4")]))

    def test_unknown_edge(self, fig1):
        """Unknown edge ids are rejected."""
        with pytest.raises(WalkError, match="e9"):
            count_agents(fig1, Schedule.create("v1", [("e9", "v2")]))


# =============================================================================
# Coverage
# =============================================================================

class TestVerifyCoverage:
    """Tests for verify_coverage."""

    def test_figure1_accepted_without_return(self, fig1):
        """The narrated walk covers everything."""
        report = verify_coverage(fig1, figure1_schedule())

        assert report.covered
        assert report.accepted

    def test_figure1_rejected_with_return(self, fig1):
        """It does not end at v1, so the return variant rejects it."""
        report = verify_coverage(fig1, figure1_schedule(), Variant.RETURN)

        assert report.covered
        assert not report.ends_at_start
        assert not report.accepted

    def test_missing_vertices_named(self, fig1):
        """Skipped vertices are listed."""
        partial = Schedule.create("v1", [("e1", "v2"), ("e4", "v5")])
        report = verify_coverage(fig1, partial)

        assert report.missing == ("v3", "v4")
        assert not report.accepted


# =============================================================================
# Fixed replay
# =============================================================================

class TestReplayFixed:
    """Tests for replay_fixed."""

    def test_agrees_with_count(self, fig1):
        """Feasible exactly from the counted total upward."""
        schedule = figure1_schedule()

        assert replay_fixed(fig1, schedule, 23).feasible
        assert replay_fixed(fig1, schedule, 30).feasible
        verdict = replay_fixed(fig1, schedule, 22)
        assert not verdict.feasible
        assert verdict.failed_step is not None

    def test_below_total_demand(self, fig1):
        """Fewer agents than N can never cover the instance."""
        verdict = replay_fixed(fig1, figure1_schedule(), 18)

        assert not verdict.feasible
        assert verdict.failed_step == 0

    def test_return_needs_an_agent_left(self):
        """With return, ending with nobody unsettled fails."""
        instance = Instance.create([("s", 0), ("b", 2)], [("e", "s", "b", 1)], "s", Variant.RETURN)
        walk = Schedule.create("s", [("e", "b"), ("e", "s")])

        assert not replay_fixed(instance, walk, 2).feasible
        assert replay_fixed(instance, walk, 3).feasible


# =============================================================================
# File format
# =============================================================================

class TestScheduleFormat:
    """Tests for parse_schedule / serialize_schedule."""

    def test_round_trip(self):
        """A serialized schedule parses back to the same walk."""
        schedule = figure1_schedule()

        assert parse_schedule(serialize_schedule(schedule)) == schedule

    def test_extra_field_rejected(self):
        """Unknown fields are rejected."""
        with pytest.raises(FormatError):
            parse_schedule('{"start": "v1", "steps": [], "note": 1}')

    def test_bad_step_rejected(self):
        """Steps are objects with exactly edge and to."""
        with pytest.raises(FormatError, match=r"steps\[0\]"):
            parse_schedule('{"start": "v1", "steps": [{"edge": "e1"}]}')


# =============================================================================
# Invariants on random walks
# =============================================================================

@st.composite
def graphs_with_walks(draw, max_vertices: int = 8, max_steps: int = 20):
    """A seeded random graph and a random walk from its start vertex."""
    n = draw(st.integers(1, max_vertices))
    seed = draw(st.integers(0, 10_000))
    variant = draw(st.sampled_from(list(Variant)))
    instance = random_graph(n, 0.4, seed, weight_max=9, variant=variant)

    steps = []
    position = instance.start
    for _ in range(draw(st.integers(0, max_steps))):
        options = instance.incident[position]
        if not options:
            break
        edge = options[draw(st.integers(0, len(options) - 1))]
        position = edge.other(position)
        steps.append((edge.id, position))
    return instance, Schedule.create(instance.start, steps)


class TestCountingInvariants:
    """count_agents and replay_fixed on arbitrary walks."""

    @given(graphs_with_walks(), st.integers(-3, 3))
    @settings(max_examples=300, deadline=None)
    def test_replay_feasible_iff_k_reaches_count(self, case, offset):
        """replay_fixed(k) succeeds exactly when k >= count_agents(...).total."""
        instance, walk = case
        total = count_agents(instance, walk).total
        k = max(0, total + offset)

        assert replay_fixed(instance, walk, k).feasible == (k >= total)

    @given(graphs_with_walks(), st.data())
    @settings(max_examples=300, deadline=None)
    def test_raising_a_weight_never_lowers_the_count(self, case, data):
        """Raising one vertex or edge weight keeps or raises the count."""
        instance, walk = case
        delta = data.draw(st.integers(1, 6))
        if instance.edges and data.draw(st.booleans()):
            i = data.draw(st.integers(0, len(instance.edges) - 1))
            edges = list(instance.edges)
            edges[i] = replace(edges[i], weight=edges[i].weight + delta)
            heavier = replace(instance, edges=tuple(edges))
        else:
            i = data.draw(st.integers(0, len(instance.vertices) - 1))
            vertices = list(instance.vertices)
            vertices[i] = replace(vertices[i], weight=vertices[i].weight + delta)
            heavier = replace(instance, vertices=tuple(vertices))

        assert count_agents(heavier, walk).total >= count_agents(instance, walk).total

    @given(graphs_with_walks())
    @settings(max_examples=300, deadline=None)
    def test_trace_prefixes(self, case):
        """curr never goes negative and add never decreases along the trace."""
        instance, walk = case
        trace = count_agents(instance, walk).trace

        assert all(curr >= 0 for curr, _ in trace)
        assert all(a <= b for (_, a), (_, b) in zip(trace, trace[1:]))
