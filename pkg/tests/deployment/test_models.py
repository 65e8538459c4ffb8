"""
Tests for Instance Models

These tests verify that the instance models:
1. Build and validate instances (every structural error has its own type)
2. Parse and serialize the JSON file format
3. Root trees deterministically and reject cycles
4. Compute total demand and the trivial bounds for both variants
5. Scale and relabel instances without changing their shape

Run with: pytest tests/deployment/test_models.py -v
"""

import json

import pytest

from deployment.models import (
    CycleError,
    DisconnectedError,
    DuplicateIdError,
    Edge,
    FormatError,
    Instance,
    MultiEdgeError,
    NegativeWeightError,
    SelfLoopError,
    UnknownEndpointError,
    Variant,
    as_tree,
    parse_instance,
    relabel,
    scale_weights,
    serialize_instance,
    total_demand,
    trivial_bounds,
)


def _text(vertices, edges, start="a", variant="no_return"):
    return json.dumps({
        "variant": variant,
        "start": start,
        "vertices": [{"id": v, "weight": w} for v, w in vertices],
        "edges": [{"id": e, "u": u, "v": v, "weight": w} for e, u, v, w in edges],
    })


# =============================================================================
# Parsing
# =============================================================================

class TestParseInstance:
    """Tests for parse_instance and the file format."""

    def test_figure1_total_demand(self, fig1):
        """The introductory instance has N = 19."""
        parsed = parse_instance(serialize_instance(fig1))

        assert parsed.total_demand == 19
        assert total_demand(parsed) == 19
        assert parsed == fig1

    def test_single_vertex(self):
        """A lone start vertex without edges is a valid instance."""
        instance = parse_instance(_text([("a", 0)], []))

        assert instance.total_demand == 0
        assert instance.edges == ()

    def test_parallel_edges_rejected(self):
        """Two edges between the same pair are a multi-edge."""
        with pytest.raises(MultiEdgeError, match="e2"):
            parse_instance(_text([("a", 1), ("b", 1)], [("e1", "a", "b", 1), ("e2", "b", "a", 2)]))

    def test_duplicate_vertex_rejected(self):
        """Vertex ids must be unique."""
        with pytest.raises(DuplicateIdError, match="'a'"):
            parse_instance(_text([("a", 1), ("a", 2)], []))

    def test_duplicate_edge_rejected(self):
        """Edge ids must be unique."""
        text = _text([("a", 1), ("b", 1), ("c", 1)], [("e", "a", "b", 1), ("e", "b", "c", 1)])
        with pytest.raises(DuplicateIdError, match="'e'"):
            parse_instance(text)

    def test_unknown_endpoint_rejected(self):
        """Edges must join existing vertices; the message names the vertex."""
        with pytest.raises(UnknownEndpointError, match="'z'"):
            parse_instance(_text([("a", 1)], [("e1", "a", "z", 1)]))

    def test_unknown_start_rejected(self):
        """The start vertex must exist."""
        with pytest.raises(UnknownEndpointError, match="start"):
            parse_instance(_text([("a", 1)], [], start="q"))

    def test_negative_weight_rejected(self):
        """Weights are non-negative."""
        with pytest.raises(NegativeWeightError, match="'a'"):
            parse_instance(_text([("a", -1)], []))

    def test_self_loop_rejected(self):
        """An edge from a vertex to itself is rejected."""
        with pytest.raises(SelfLoopError, match="e1"):
            parse_instance(_text([("a", 1)], [("e1", "a", "a", 1)]))

    def test_disconnected_rejected(self):
        """Every vertex must be reachable from the start; unreachable ones are named."""
        with pytest.raises(DisconnectedError, match="c"):
            parse_instance(_text([("a", 1), ("b", 1), ("c", 1)], [("e1", "a", "b", 1)]))

    def test_unknown_field_rejected(self):
        """Unknown fields are a format error naming the field."""
        data = json.loads(_text([("a", 1)], []))
        data["colour"] = "red"
        with pytest.raises(FormatError, match="colour"):
            parse_instance(json.dumps(data))

    def test_bad_variant_rejected(self):
        """The variant is one of two strings."""
        with pytest.raises(FormatError, match="variant"):
            parse_instance(_text([("a", 1)], [], variant="sometimes"))

    def test_invalid_json(self):
        """Broken JSON is a format error, not a JSONDecodeError."""
        with pytest.raises(FormatError):
            parse_instance("{not json")

    def test_boolean_weight_rejected(self):
        """true is not an integer weight."""
        text = json.dumps({
            "variant": "return", "start": "a",
            "vertices": [{"id": "a", "weight": True}], "edges": [],
        })
        with pytest.raises(FormatError):
            parse_instance(text)


# =============================================================================
# Instance behaviour
# =============================================================================

class TestInstance:
    """Tests for derived data on Instance."""

    def test_is_immutable(self, fig1):
        """Instance is frozen."""
        with pytest.raises(AttributeError):
            fig1.start = "v2"

    def test_with_variant(self, fig1):
        """with_variant keeps the graph and switches the variant."""
        returning = fig1.with_variant(Variant.RETURN)

        assert returning.variant is Variant.RETURN
        assert returning.edges == fig1.edges

    def test_incident_sorted_by_other_endpoint(self, fig1):
        """Incident edges are ordered by the opposite endpoint's id."""
        assert [e.id for e in fig1.incident["v2"]] == ["e1", "e2", "e4"]

    def test_edge_other(self):
        """Edge.other returns the opposite endpoint and rejects strangers."""
        edge = Edge("e", "a", "b", 3)

        assert edge.other("a") == "b"
        assert edge.other("b") == "a"
        with pytest.raises(UnknownEndpointError):
            edge.other("c")

    def test_to_networkx_carries_ids(self, fig1):
        """The networkx view keeps edge ids and weights."""
        graph = fig1.to_networkx()

        assert graph.edges["v2", "v3"]["id"] == "e2"
        assert graph.edges["v2", "v3"]["weight"] == 20


# =============================================================================
# Rooted trees
# =============================================================================

class TestAsTree:
    """Tests for rooting an instance at its start."""

    def test_figure1_structure(self, fig1_tree):
        """Rooted at v1 with children v2, v4; v2's children are v3, v5."""
        assert fig1_tree.root == "v1"
        assert fig1_tree.children["v1"] == ("v2", "v4")
        assert fig1_tree.children["v2"] == ("v3", "v5")
        assert fig1_tree.parent_edge["v3"].id == "e2"
        assert fig1_tree.leaves == ("v3", "v5", "v4")

    def test_star(self, star):
        """A star is a root with one leaf child per edge."""
        assert len(star.children["s"]) == 3
        assert all(star.is_leaf(v) for v in star.children["s"])

    def test_triangle_rejected(self):
        """A cycle cannot be rooted as a tree."""
        triangle = Instance.create(
            vertices=[("a", 1), ("b", 1), ("c", 1)],
            edges=[("e1", "a", "b", 1), ("e2", "b", "c", 1), ("e3", "c", "a", 1)],
            start="a",
        )
        with pytest.raises(CycleError):
            as_tree(triangle)

    def test_preorder_and_depth(self, fig1_tree):
        """Preorder visits children by id; depth counts edges from the root."""
        assert fig1_tree.preorder == ("v1", "v2", "v3", "v5", "v4")
        assert fig1_tree.depth["v5"] == 2

    def test_root_is_never_a_leaf(self):
        """A single vertex tree has no leaves."""
        tree = as_tree(Instance.create([("s", 3)], [], "s"))

        assert tree.leaves == ()


# =============================================================================
# Bounds and transformations
# =============================================================================

class TestBoundsAndTransforms:
    """Tests for trivial_bounds, scale_weights and relabel."""

    def test_trivial_bounds(self, fig1):
        """(N, N + w_max)."""
        assert trivial_bounds(fig1) == (19, 39)

    def test_trivial_bounds_return_without_edge_weights(self):
        """A returning group must be nonempty, so the upper bound is at least N + 1."""
        instance = Instance.create([("s", 2), ("a", 1)], [("e", "s", "a", 0)], "s", Variant.RETURN)

        assert trivial_bounds(instance) == (3, 4)

    def test_trivial_bounds_single_vertex(self):
        """An edgeless vertex of demand 5 is pinned at (5, 5) without return, (5, 6) with it."""
        lone = Instance.create([("s", 5)], [], "s")

        assert trivial_bounds(lone) == (5, 5)
        assert trivial_bounds(lone.with_variant(Variant.RETURN)) == (5, 6)

    def test_scale_weights(self, fig1):
        """Every weight is multiplied; ids stay."""
        scaled = scale_weights(fig1, 3)

        assert scaled.total_demand == 57
        assert scaled.edge_by_id["e2"].weight == 60

    def test_scale_weights_rejects_zero(self, fig1):
        """The factor must be a positive integer."""
        with pytest.raises(ValueError):
            scale_weights(fig1, 0)

    def test_relabel(self, fig1):
        """Renaming ids keeps weights and structure."""
        renamed = relabel(fig1, {"v1": "root", "v5": "big"}, {"e4": "heavy"})

        assert renamed.start == "root"
        assert renamed.weight_of["big"] == 15
        assert renamed.edge_by_id["heavy"].u == "v2"
        assert renamed.edge_by_id["heavy"].v == "big"
