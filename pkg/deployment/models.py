"""
Deployment Instance Models

This module defines the problem instances the solvers work on: a weighted
undirected graph, a start vertex and the variant (whether a group of agents
has to come back to the start).

Design principles:
- Immutable (frozen dataclasses); derived adjacency is cached, never mutated
- Validation happens on construction, so every Instance in memory is valid
- Serializable to/from dict and JSON in one canonical file format
- Every error names the element that caused it

The models follow a hierarchy:
- Vertex / Edge: weighted identities
- Instance: the whole problem (connected, simple graph)
- TreeInstance: an Instance whose edges form a tree, rooted at the start

File format (UTF-8 JSON):
    {"variant": "return" | "no_return", "start": "<vid>",
     "vertices": [{"id": "<vid>", "weight": <int>}, ...],
     "edges": [{"id": "<eid>", "u": "<vid>", "v": "<vid>", "weight": <int>}, ...]}
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Mapping, Optional
import json
import logging

import networkx as nx

logger = logging.getLogger(__name__)

MAX_WEIGHT = 2**63 - 1


# =============================================================================
# Exceptions
# =============================================================================

class DeploymentError(Exception):
    """Base exception for everything raised by the toolkit."""
    pass


class InstanceError(DeploymentError):
    """Raised when an instance violates a structural rule."""
    pass


class FormatError(InstanceError):
    """Raised when serialized input does not follow the file format."""
    pass


class DuplicateIdError(InstanceError):
    """Raised when two vertices or two edges share an id."""
    pass


class UnknownEndpointError(InstanceError):
    """Raised when an edge (or the start) refers to a missing vertex."""
    pass


class NegativeWeightError(InstanceError):
    """Raised for weights outside [0, 2^63 - 1]."""
    pass


class DisconnectedError(InstanceError):
    """Raised when some vertex cannot be reached from the start."""
    pass


class SelfLoopError(InstanceError):
    """Raised for an edge whose endpoints coincide."""
    pass


class MultiEdgeError(InstanceError):
    """Raised when two edges join the same pair of vertices."""
    pass


class CycleError(InstanceError):
    """Raised when a tree was required but the edges contain a cycle."""
    pass


# =============================================================================
# Enums and identities
# =============================================================================

class Variant(Enum):
    """
    Whether the deployment has to report back.

    - RETURN: a nonempty group of agents must end at the start vertex
    - NO_RETURN: the walk may end anywhere once every vertex is covered
    """
    RETURN = "return"
    NO_RETURN = "no_return"


@dataclass(frozen=True)
class Vertex:
    """A vertex with the number of agents it permanently absorbs."""
    id: str
    weight: int

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "weight": self.weight}


@dataclass(frozen=True)
class Edge:
    """An undirected edge that needs a group of at least `weight` agents."""
    id: str
    u: str
    v: str
    weight: int

    def other(self, vertex_id: str) -> str:
        """The endpoint opposite to `vertex_id`."""
        if vertex_id == self.u:
            return self.v
        if vertex_id == self.v:
            return self.u
        raise UnknownEndpointError(f"vertex '{vertex_id}' is not an endpoint of edge '{self.id}'")

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "u": self.u, "v": self.v, "weight": self.weight}


# =============================================================================
# Instance
# =============================================================================

@dataclass(frozen=True)
class Instance:
    """
    A strategic deployment instance.

    Attributes:
        vertices: Vertices with their demands w_v
        edges: Edges with their crossing strengths w_e
        start: Id of the start vertex v_s
        variant: Return or no-return

    Example:
        >>> inst = Instance.create(
        ...     vertices=[("s", 0), ("a", 2)],
        ...     edges=[("e1", "s", "a", 3)],
        ...     start="s",
        ... )
        >>> inst.total_demand
        2
    """
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    start: str
    variant: Variant = Variant.NO_RETURN

    def __post_init__(self):
        """Validate structure; raise the matching InstanceError subclass."""
        seen: set[str] = set()
        for vertex in self.vertices:
            if not isinstance(vertex.id, str) or not vertex.id:
                raise FormatError(f"vertex id must be a nonempty string, got {vertex.id!r}")
            if vertex.id in seen:
                raise DuplicateIdError(f"duplicate vertex id '{vertex.id}'")
            seen.add(vertex.id)
            _check_weight(vertex.weight, f"vertex '{vertex.id}'")

        if self.start not in seen:
            raise UnknownEndpointError(f"start vertex '{self.start}' does not exist")

        edge_ids: set[str] = set()
        pairs: dict[frozenset[str], str] = {}
        for edge in self.edges:
            if not isinstance(edge.id, str) or not edge.id:
                raise FormatError(f"edge id must be a nonempty string, got {edge.id!r}")
            if edge.id in edge_ids:
                raise DuplicateIdError(f"duplicate edge id '{edge.id}'")
            edge_ids.add(edge.id)
            for endpoint in (edge.u, edge.v):
                if endpoint not in seen:
                    raise UnknownEndpointError(
                        f"edge '{edge.id}' refers to unknown vertex '{endpoint}'"
                    )
            if edge.u == edge.v:
                raise SelfLoopError(f"edge '{edge.id}' is a self-loop on '{edge.u}'")
            pair = frozenset((edge.u, edge.v))
            if pair in pairs:
                raise MultiEdgeError(
                    f"edges '{pairs[pair]}' and '{edge.id}' both join '{edge.u}' and '{edge.v}'"
                )
            pairs[pair] = edge.id
            _check_weight(edge.weight, f"edge '{edge.id}'")

        if sum(v.weight for v in self.vertices) > MAX_WEIGHT:
            raise NegativeWeightError("total vertex demand exceeds the 64-bit weight range")

        graph = self.to_networkx()
        if not nx.is_connected(graph):
            reachable = nx.node_connected_component(graph, self.start)
            missing = sorted(set(graph.nodes) - reachable)
            raise DisconnectedError(
                f"vertices unreachable from '{self.start}': {', '.join(missing[:10])}"
                + (" ..." if len(missing) > 10 else "")
            )

    # -------------------------------------------------------------------------
    # Factories
    # -------------------------------------------------------------------------

    @classmethod
    def create(
        cls,
        vertices: Iterable[tuple[str, int]],
        edges: Iterable[tuple[str, str, str, int]],
        start: str,
        variant: Variant = Variant.NO_RETURN,
    ) -> "Instance":
        """Build an instance from plain tuples (id, weight) and (id, u, v, weight)."""
        return cls(
            vertices=tuple(Vertex(vid, weight) for vid, weight in vertices),
            edges=tuple(Edge(eid, u, v, weight) for eid, u, v, weight in edges),
            start=start,
            variant=variant,
        )

    def with_variant(self, variant: Variant) -> "Instance":
        """Same graph, other variant."""
        return Instance(self.vertices, self.edges, self.start, variant)

    # -------------------------------------------------------------------------
    # Derived data
    # -------------------------------------------------------------------------

    @cached_property
    def weight_of(self) -> dict[str, int]:
        """Vertex id -> demand."""
        return {v.id: v.weight for v in self.vertices}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> dict[str, tuple[Edge, ...]]:
        """Vertex id -> incident edges, ordered by the opposite endpoint's id."""
        adjacency: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        for edge in self.edges:
            adjacency[edge.u].append(edge)
            adjacency[edge.v].append(edge)
        return {
            vid: tuple(sorted(edges, key=lambda e, vid=vid: (e.other(vid), e.id)))
            for vid, edges in adjacency.items()
        }

    @property
    def total_demand(self) -> int:
        """N, the sum of all vertex demands."""
        return sum(v.weight for v in self.vertices)

    @property
    def max_edge_weight(self) -> int:
        """w_max, or 0 without edges."""
        return max((e.weight for e in self.edges), default=0)

    @property
    def is_tree(self) -> bool:
        """Connected with |E| = |V| - 1."""
        return len(self.edges) == len(self.vertices) - 1

    def to_networkx(self) -> nx.Graph:
        """Undirected networkx view; edge data carries `id` and `weight`."""
        graph = nx.Graph()
        graph.add_nodes_from(sorted(v.id for v in self.vertices))
        for edge in sorted(self.edges, key=lambda e: e.id):
            graph.add_edge(edge.u, edge.v, id=edge.id, weight=edge.weight)
        return graph

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        """Convert to the canonical file-format dictionary."""
        return {
            "variant": self.variant.value,
            "start": self.start,
            "vertices": [v.to_dict() for v in self.vertices],
            "edges": [e.to_dict() for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Instance":
        """Reconstruct from the file-format dictionary, rejecting unknown fields."""
        if not isinstance(data, Mapping):
            raise FormatError("instance must be a JSON object")
        _check_fields(data, required={"variant", "start", "vertices", "edges"}, where="instance")

        try:
            variant = Variant(data["variant"])
        except ValueError:
            raise FormatError(
                f"variant must be 'return' or 'no_return', got {data['variant']!r}"
            ) from None

        if not isinstance(data["vertices"], list):
            raise FormatError("'vertices' must be a list")
        if not isinstance(data["edges"], list):
            raise FormatError("'edges' must be a list")

        vertices = []
        for i, item in enumerate(data["vertices"]):
            where = f"vertices[{i}]"
            _check_fields(item, required={"id", "weight"}, where=where)
            vertices.append(Vertex(_as_id(item["id"], where), _as_int(item["weight"], where)))

        edges = []
        for i, item in enumerate(data["edges"]):
            where = f"edges[{i}]"
            _check_fields(item, required={"id", "u", "v", "weight"}, where=where)
            edges.append(Edge(
                _as_id(item["id"], where),
                _as_id(item["u"], where),
                _as_id(item["v"], where),
                _as_int(item["weight"], where),
            ))

        return cls(
            vertices=tuple(vertices),
            edges=tuple(edges),
            start=_as_id(data["start"], "start"),
            variant=variant,
        )

    def __repr__(self) -> str:
        return (
            f"Instance({self.variant.value}, start={self.start}, "
            f"|V|={len(self.vertices)}, |E|={len(self.edges)}, N={self.total_demand})"
        )


# =============================================================================
# Rooted trees
# =============================================================================

@dataclass(frozen=True)
class TreeInstance:
    """
    An Instance whose edges form a spanning tree, rooted at the start.

    Children are ordered by vertex id so every traversal is reproducible.
    Build it with `as_tree(instance)`.
    """
    instance: Instance
    parent: Mapping[str, Optional[str]]
    parent_edge: Mapping[str, Optional[Edge]]
    children: Mapping[str, tuple[str, ...]]

    @property
    def root(self) -> str:
        return self.instance.start

    @property
    def variant(self) -> Variant:
        return self.instance.variant

    @property
    def total_demand(self) -> int:
        return self.instance.total_demand

    def weight(self, vertex_id: str) -> int:
        return self.instance.weight_of[vertex_id]

    def is_leaf(self, vertex_id: str) -> bool:
        """Non-root vertex without children."""
        return vertex_id != self.root and not self.children[vertex_id]

    @cached_property
    def preorder(self) -> tuple[str, ...]:
        """Depth-first preorder from the root, children visited by id."""
        order = []
        stack = [self.root]
        while stack:
            vertex = stack.pop()
            order.append(vertex)
            stack.extend(reversed(self.children[vertex]))
        return tuple(order)

    @cached_property
    def preorder_index(self) -> dict[str, int]:
        return {vertex: i for i, vertex in enumerate(self.preorder)}

    @cached_property
    def depth(self) -> dict[str, int]:
        depth = {self.root: 0}
        for vertex in self.preorder[1:]:
            depth[vertex] = depth[self.parent[vertex]] + 1
        return depth

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        """Leaves in preorder."""
        return tuple(v for v in self.preorder if self.is_leaf(v))

    def with_variant(self, variant: Variant) -> "TreeInstance":
        return as_tree(self.instance.with_variant(variant))

    def __repr__(self) -> str:
        return f"TreeInstance(root={self.root}, |V|={len(self.preorder)}, leaves={len(self.leaves)})"


# =============================================================================
# Operations
# =============================================================================

def parse_instance(text: str) -> Instance:
    """Parse the JSON file format into a validated Instance."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None
    return Instance.from_dict(data)


def serialize_instance(instance: Instance) -> str:
    """Render an Instance in the JSON file format."""
    return json.dumps(instance.to_dict(), indent=2)


def as_tree(instance: Instance) -> TreeInstance:
    """
    Root the instance's edges at the start vertex.

    Raises:
        CycleError: If the edges do not form a tree
    """
    if not instance.is_tree:
        try:
            cycle = nx.find_cycle(instance.to_networkx(), source=instance.start)
            where = " -> ".join(u for u, _ in cycle)
        except nx.NetworkXNoCycle:
            where = "unknown"
        raise CycleError(f"instance is not a tree; cycle through {where}")

    parent: dict[str, Optional[str]] = {instance.start: None}
    parent_edge: dict[str, Optional[Edge]] = {instance.start: None}
    children: dict[str, list[str]] = {v.id: [] for v in instance.vertices}
    stack = [instance.start]
    while stack:
        vertex = stack.pop()
        for edge in instance.incident[vertex]:
            other = edge.other(vertex)
            if other == parent[vertex]:
                continue
            parent[other] = vertex
            parent_edge[other] = edge
            children[vertex].append(other)
            stack.append(other)

    return TreeInstance(
        instance=instance,
        parent=parent,
        parent_edge=parent_edge,
        children={v: tuple(sorted(c)) for v, c in children.items()},
    )


def total_demand(instance: Instance) -> int:
    """N := sum of all vertex weights."""
    return instance.total_demand


def trivial_bounds(instance: Instance) -> tuple[int, int]:
    """
    (N, N + w_max): every instance needs N agents and a DFS walk with
    N + w_max agents always works. A returning group must be nonempty, so an
    all-zero-edge Return instance has upper bound N + 1.
    """
    n = instance.total_demand
    w_max = instance.max_edge_weight
    upper = n + w_max
    if instance.variant is Variant.RETURN and w_max == 0:
        upper = n + 1
    return n, upper


def scale_weights(instance: Instance, factor: int) -> Instance:
    """Multiply every vertex and edge weight by a positive integer."""
    if factor < 1:
        raise ValueError(f"factor must be a positive integer, got {factor}")
    return Instance(
        vertices=tuple(Vertex(v.id, v.weight * factor) for v in instance.vertices),
        edges=tuple(Edge(e.id, e.u, e.v, e.weight * factor) for e in instance.edges),
        start=instance.start,
        variant=instance.variant,
    )


def relabel(
    instance: Instance,
    vertex_map: Mapping[str, str],
    edge_map: Optional[Mapping[str, str]] = None,
) -> Instance:
    """Rename ids by a bijection; ids missing from a map keep their name."""
    edge_map = edge_map or {}

    def vid(x: str) -> str:
        return vertex_map.get(x, x)

    return Instance(
        vertices=tuple(Vertex(vid(v.id), v.weight) for v in instance.vertices),
        edges=tuple(
            Edge(edge_map.get(e.id, e.id), vid(e.u), vid(e.v), e.weight) for e in instance.edges
        ),
        start=vid(instance.start),
        variant=instance.variant,
    )


# =============================================================================
# Helpers
# =============================================================================

def _check_weight(weight: Any, where: str) -> None:
    if isinstance(weight, bool) or not isinstance(weight, int):
        raise FormatError(f"{where}: weight must be an integer, got {weight!r}")
    if weight < 0:
        raise NegativeWeightError(f"{where}: negative weight {weight}")
    if weight > MAX_WEIGHT:
        raise NegativeWeightError(f"{where}: weight {weight} exceeds the 64-bit range")


def _check_fields(item: Any, required: set[str], where: str) -> None:
    if not isinstance(item, Mapping):
        raise FormatError(f"{where} must be a JSON object")
    unknown = set(item) - required
    if unknown:
        raise FormatError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    missing = required - set(item)
    if missing:
        raise FormatError(f"{where}: missing field(s) {', '.join(sorted(missing))}")


def _as_id(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise FormatError(f"{where}: id must be a nonempty string, got {value!r}")
    return value


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}: weight must be an integer, got {value!r}")
    return value
