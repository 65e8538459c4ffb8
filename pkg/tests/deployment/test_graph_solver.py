"""
Tests for General-Graph Solving

These tests verify that:
1. minimum_spanning_tree matches networkx's MST weight and keeps trees intact
2. solve_mst_approx stays within twice the exact optimum
3. The certified lower bound never exceeds the exact optimum
4. dfs_baseline produces valid walks within the trivial upper bound

Run with: pytest tests/deployment/test_graph_solver.py -v
"""

import networkx as nx
import pytest

from deployment.generators import figure1_instance, random_graph, random_tree
from deployment.graph_solver import dfs_baseline, minimum_spanning_tree, solve_mst_approx
from deployment.models import Instance, Variant, trivial_bounds
from deployment.oracle import exact_min_agents
from deployment.schedule import count_agents, verify_coverage
from deployment.tree_solver import Method


@pytest.fixture
def four_cycle():
    """a-b-c-d-a with edge weights 1, 2, 3, 4 and unit demands."""
    return Instance.create(
        vertices=[("a", 0), ("b", 1), ("c", 1), ("d", 1)],
        edges=[("e1", "a", "b", 1), ("e2", "b", "c", 2), ("e3", "c", "d", 3), ("e4", "d", "a", 4)],
        start="a",
    )


# =============================================================================
# Minimum spanning tree
# =============================================================================

class TestMinimumSpanningTree:
    """Tests for minimum_spanning_tree."""

    def test_four_cycle_drops_heaviest(self, four_cycle):
        """The weight-4 edge closes the cycle and is dropped."""
        tree = minimum_spanning_tree(four_cycle)

        assert {e.id for e in tree.instance.edges} == {"e1", "e2", "e3"}
        assert tree.root == "a"

    def test_tree_is_its_own_mst(self):
        """A tree keeps every edge."""
        tree = random_tree(25, seed=3)

        assert minimum_spanning_tree(tree.instance).instance.edges == tuple(
            sorted(tree.instance.edges, key=lambda e: (e.weight, e.id))
        )

    @pytest.mark.parametrize("seed", range(15))
    def test_weight_matches_networkx(self, seed):
        """Total MST weight equals networkx's."""
        instance = random_graph(15, 0.3, seed)
        ours = sum(e.weight for e in minimum_spanning_tree(instance).instance.edges)
        reference = nx.minimum_spanning_tree(instance.to_networkx(), weight="weight")

        assert ours == reference.size(weight="weight")

    def test_variant_carried_over(self, four_cycle):
        """The MST keeps the instance's variant."""
        tree = minimum_spanning_tree(four_cycle.with_variant(Variant.RETURN))

        assert tree.variant is Variant.RETURN


# =============================================================================
# MST approximation
# =============================================================================

class TestSolveMstApprox:
    """Tests for solve_mst_approx."""

    def test_four_cycle(self, four_cycle):
        """Played on the path a-b-c-d: the group needs 3 to cross e3 with 2 settled, total 5."""
        approx = solve_mst_approx(four_cycle)

        assert approx.method is Method.MST_APPROX
        assert approx.total == 5
        assert approx.total == count_agents(four_cycle, approx.schedule).total
        assert approx.lower_bound == 3
        assert approx.ratio_certificate == approx.total / 3

    def test_figure1_is_already_a_tree(self):
        """On a tree the approximation is exact."""
        approx = solve_mst_approx(figure1_instance())

        assert approx.total == 23
        assert approx.lower_bound == 20

    def test_to_dict_includes_certificate(self, four_cycle):
        """The serialized form reports the bound and the ratio."""
        data = solve_mst_approx(four_cycle).to_dict()

        assert data["method"] == "mst-approx"
        assert data["lower_bound"] == 3

    @pytest.mark.parametrize("variant", [Variant.NO_RETURN, Variant.RETURN])
    @pytest.mark.parametrize("seed", range(25))
    def test_within_twice_optimum(self, seed, variant):
        """lower_bound <= optimum <= total <= 2 * optimum on small graphs."""
        instance = random_graph(3 + seed % 6, 0.4, seed, weight_max=6, variant=variant)
        approx = solve_mst_approx(instance)
        optimum = exact_min_agents(instance)

        assert approx.lower_bound <= optimum <= approx.total <= 2 * optimum
        assert approx.ratio_certificate <= 2.0
        assert verify_coverage(instance, approx.schedule).accepted


# =============================================================================
# DFS baseline
# =============================================================================

class TestDfsBaseline:
    """Tests for dfs_baseline."""

    @pytest.mark.parametrize("variant", [Variant.NO_RETURN, Variant.RETURN])
    @pytest.mark.parametrize("seed", range(20))
    def test_valid_and_bounded(self, seed, variant):
        """The walk covers the graph and never needs more than the trivial upper bound."""
        instance = random_graph(4 + seed, 0.3, seed, variant=variant)
        baseline = dfs_baseline(instance)
        _, upper = trivial_bounds(instance)

        assert verify_coverage(instance, baseline.schedule).accepted
        assert baseline.total <= upper
        assert baseline.method is Method.DFS_BASELINE

    def test_discovery_order(self, four_cycle):
        """visit_order starts at v_s and lists each vertex once."""
        baseline = dfs_baseline(four_cycle)

        assert baseline.visit_order[0] == "a"
        assert sorted(baseline.visit_order) == ["a", "b", "c", "d"]

    def test_no_return_ends_at_last_discovery(self, four_cycle):
        """Without return the walk stops where the last new vertex was found."""
        baseline = dfs_baseline(four_cycle)

        assert baseline.end_vertex == baseline.visit_order[-1]

    def test_return_ends_at_start(self, four_cycle):
        """With return the walk backtracks all the way."""
        baseline = dfs_baseline(four_cycle.with_variant(Variant.RETURN))

        assert baseline.end_vertex == "a"
