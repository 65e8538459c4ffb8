"""
Tree Decomposition by Dominating Edges

Every leaf b of a rooted tree has a dominating edge e(b): the heaviest edge
on its root path, the one nearest to the root among equal maxima. Leaves
sharing a dominating edge form a collected subtree, rooted at the edge's
lower endpoint v(b). Collected subtrees are the units the tree solvers
order, visit and leave.

Two constructions live here:
- top_decomposition: one walk over the tree plus a sort; top level only.
- recursive_decomposition: bottom-up with mergeable heaps keyed by the
  dominating weight x; every collected subtree also carries the collected
  subtrees of its own inside (children, decreasing x), down to single leaves.

Annotations on every collected subtree:
- x: weight of its dominating edge (0 for the whole tree)
- y: demand first settled when the parent level visits its subtrees in
  decreasing x (its own demand plus path demand attributed to it)
- core: demand of vertices whose whole subtree lies inside it; these are
  exactly the vertices still unsettled when a walk enters it last

Ties between equal x are broken by root vertex id, everywhere.

Usage:
    decomposition = recursive_decomposition(tree)
    print(decomposition.dump())
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Optional
import logging

from deployment.heap import PairingHeap
from deployment.models import DeploymentError, TreeInstance

logger = logging.getLogger(__name__)


class NotALeafError(DeploymentError):
    """Raised when a leaf is required but the vertex has children (or is the root)."""
    pass


# =============================================================================
# Models
# =============================================================================

@dataclass(frozen=True)
class DominatingEdge:
    """The heaviest root-path edge of a leaf, ties broken toward the root."""
    leaf: str
    edge: str
    lower: str
    weight: int


@dataclass(frozen=True, eq=False)
class CollectedSubtree:
    """
    A decomposition unit.

    Attributes:
        root: v(b), lower endpoint of the dominating edge
        edge: Id of the dominating edge
        x: Dominating edge weight
        y: Demand contribution within the parent's list
        core: Demand of the vertices whose subtree lies entirely inside
        leaf: The leaf itself, for single-leaf units
        children: Collected subtrees of the inside, decreasing x
        redominated: True when a single subtree merely changed its dominating
            edge (one child, no new list entry formed at that vertex)
        leaves: Explicit member list when no hierarchy was built
    """
    root: str
    edge: Optional[str]
    x: int
    y: int
    core: int
    leaf: Optional[str] = None
    children: tuple["CollectedSubtree", ...] = ()
    redominated: bool = False
    leaves: tuple[str, ...] = ()

    @cached_property
    def members(self) -> tuple[str, ...]:
        """Member leaves; for hierarchies, in children order."""
        if self.leaf is not None:
            return (self.leaf,)
        if not self.children:
            return self.leaves
        found = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.leaf is not None:
                found.append(node.leaf)
            else:
                stack.extend(reversed(node.children))
        return tuple(found)

    @property
    def label(self) -> str:
        return f"T({','.join(self.members)})^{{{self.x},{self.y}}}"

    def walk(self) -> Iterator["CollectedSubtree"]:
        """This subtree and every nested one, preorder."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def __repr__(self) -> str:
        return f"{self.label} @ {self.root}"


class DecompositionEvent(NamedTuple):
    """One step of the heap construction, recorded on request."""
    vertex: str
    action: str     # "leaf", "attach", "collect", "redominate", "top"
    label: str
    x: int
    y: int


@dataclass(frozen=True, eq=False)
class Decomposition:
    """
    Ordered top-level collected subtrees of a rooted tree.

    The whole tree is the implicit root unit: x = 0 and y is `total`.
    """
    root: str
    total: int
    subtrees: tuple[CollectedSubtree, ...]
    @cached_property
    def owner(self) -> dict[str, CollectedSubtree]:
        """Leaf -> owning top-level subtree."""
        return {leaf: subtree for subtree in self.subtrees for leaf in subtree.members}

    def walk(self) -> Iterator[CollectedSubtree]:
        """Every collected subtree at every level."""
        for subtree in self.subtrees:
            yield from subtree.walk()

    @property
    def entries(self) -> int:
        return sum(1 for _ in self.walk())

    def dump(self) -> str:
        """One line per subtree, "T(<leaves>)^{x,y} @ <root>", children indented."""
        lines = []
        stack = [(subtree, 0) for subtree in reversed(self.subtrees)]
        while stack:
            node, depth = stack.pop()
            lines.append(f"{'  ' * depth}{node!r}")
            stack.extend((child, depth + 1) for child in reversed(node.children))
        return "\n".join(lines)


# =============================================================================
# Operations
# =============================================================================

def dominating_edge(tree: TreeInstance, leaf: str) -> DominatingEdge:
    """
    Heaviest edge on the path from the root to `leaf`, nearest to the root on ties.

    Raises:
        NotALeafError: If `leaf` is the root or has children
    """
    if leaf not in tree.children or not tree.is_leaf(leaf):
        raise NotALeafError(f"'{leaf}' is not a leaf of the tree rooted at '{tree.root}'")

    best = None
    best_lower = leaf
    vertex = leaf
    while vertex != tree.root:
        edge = tree.parent_edge[vertex]
        if best is None or edge.weight >= best.weight:
            best, best_lower = edge, vertex
        vertex = tree.parent[vertex]
    return DominatingEdge(leaf=leaf, edge=best.id, lower=best_lower, weight=best.weight)


def top_decomposition(tree: TreeInstance) -> Decomposition:
    """
    Partition the leaves into collected subtrees, sorted by decreasing x.

    One pass down (root-path maxima), one pass up (maxima and bottleneck minima
    below each vertex), a sort, and the marking pass that assigns y.
    """
    parent = tree.parent
    parent_edge = tree.parent_edge
    root = tree.root
    weight = tree.instance.weight_of

    # (weight, edge id, lower endpoint) of the dominating edge of each root path
    path_max: dict[str, tuple[int, str, str]] = {}
    for vertex in tree.preorder[1:]:
        edge = parent_edge[vertex]
        above = parent[vertex]
        if above == root or edge.weight > path_max[above][0]:
            path_max[vertex] = (edge.weight, edge.id, vertex)
        else:
            path_max[vertex] = path_max[above]

    # heaviest edge below, and the lightest "heaviest edge to a leaf" below
    max_below: dict[str, int] = {}
    min_max_below: dict[str, int] = {}
    for vertex in reversed(tree.preorder):
        kids = tree.children[vertex]
        if not kids:
            max_below[vertex] = min_max_below[vertex] = -1
            continue
        max_below[vertex] = max(max(parent_edge[c].weight, max_below[c]) for c in kids)
        min_max_below[vertex] = min(max(parent_edge[c].weight, min_max_below[c]) for c in kids)

    owner: dict[str, str] = {}
    content: dict[str, int] = {}
    core: dict[str, int] = {}
    members: dict[str, list[str]] = {}
    lower: dict[str, str] = {}
    x_of: dict[str, int] = {}
    for vertex in tree.preorder[1:]:
        w, edge_id, low = path_max[vertex]
        if min_max_below[vertex] > w:
            continue    # every leaf below is dominated further down
        owner[vertex] = edge_id
        content[edge_id] = content.get(edge_id, 0) + weight[vertex]
        if max_below[vertex] <= w:
            core[edge_id] = core.get(edge_id, 0) + weight[vertex]
        if tree.is_leaf(vertex):
            members.setdefault(edge_id, []).append(vertex)
        lower[edge_id] = low
        x_of[edge_id] = w

    order = sorted(members, key=lambda e: (-x_of[e], lower[e]))

    # y: settle each subtree's remaining demand plus its unmarked root path
    remaining = dict(content)
    marked: set[str] = set()
    subtrees = []
    for edge_id in order:
        r = lower[edge_id]
        path = 0
        marked.add(r)
        vertex = parent[r]
        while vertex is not None and vertex not in marked:
            marked.add(vertex)
            path += weight[vertex]
            if vertex in owner:
                remaining[owner[vertex]] -= weight[vertex]
            vertex = parent[vertex]
        y = remaining[edge_id] + path
        remaining[edge_id] = 0
        subtrees.append(CollectedSubtree(
            root=r,
            edge=edge_id,
            x=x_of[edge_id],
            y=y,
            core=core.get(edge_id, 0),
            leaves=tuple(members[edge_id]),
        ))

    logger.debug("top decomposition of %r: %d collected subtrees", tree, len(subtrees))
    return Decomposition(root=root, total=tree.total_demand, subtrees=tuple(subtrees))


class _Entry:
    """Mutable heap item; frozen into a CollectedSubtree once its y is final."""
    __slots__ = ("root", "edge", "x", "y", "core", "leaf", "children", "redominated")

    def __init__(self, root, edge, x, y, leaf=None, children=(), redominated=False):
        self.root = root
        self.edge = edge
        self.x = x
        self.y = y
        self.core = y
        self.leaf = leaf
        self.children = children
        self.redominated = redominated

    def ahead_of(self, other: "_Entry") -> bool:
        """Earlier in decreasing-x order (larger x, then smaller root id)."""
        return self.x > other.x or (self.x == other.x and self.root < other.root)

    def freeze(self) -> CollectedSubtree:
        return CollectedSubtree(
            root=self.root,
            edge=self.edge,
            x=self.x,
            y=self.y,
            core=self.core,
            leaf=self.leaf,
            children=self.children,
            redominated=self.redominated,
        )


def _list_order(subtree: CollectedSubtree) -> tuple[int, str]:
    return -subtree.x, subtree.root


def recursive_decomposition(
    tree: TreeInstance,
    events: Optional[list[DecompositionEvent]] = None,
) -> Decomposition:
    """
    Build the full (x, y)-annotated hierarchy bottom-up.

    At a leaf: a single-leaf subtree (x = incoming edge weight, y = demand).
    At an inner vertex: meld the children's heaps, add the vertex demand to
    the y of the subtree with the largest x, then extract every subtree with
    x <= incoming edge weight and collect them under a new subtree with that
    x. At the root every remaining subtree is extracted into the top list.

    Args:
        tree: Rooted tree
        events: If given, receives one DecompositionEvent per construction step
    """
    root = tree.root
    weight = tree.instance.weight_of
    pending: dict[str, tuple[PairingHeap, _Entry]] = {}
    top: list[CollectedSubtree] = []

    def record(vertex: str, action: str, entry) -> None:
        if events is not None:
            label = entry.freeze().label if isinstance(entry, _Entry) else entry.label
            events.append(DecompositionEvent(vertex, action, label, entry.x, entry.y))

    for vertex in reversed(tree.preorder):
        kids = tree.children[vertex]
        incoming = tree.parent_edge[vertex]

        if not kids:
            if vertex == root:
                break
            entry = _Entry(vertex, incoming.id, incoming.weight, weight[vertex], leaf=vertex)
            heap: PairingHeap[_Entry] = PairingHeap()
            heap.push((entry.x, entry.root), entry)
            pending[vertex] = (heap, entry)
            record(vertex, "leaf", entry)
            continue

        heap, best = pending.pop(kids[0])
        for kid in kids[1:]:
            other, other_best = pending.pop(kid)
            heap.meld(other)
            if other_best.ahead_of(best):
                best = other_best
        best.y += weight[vertex]
        record(vertex, "attach", best)

        if vertex == root:
            top = sorted((entry.freeze() for _, entry in heap.drain()), key=_list_order)
            for subtree in top:
                record(vertex, "top", subtree)
            break

        extracted = []
        while heap and heap.peek_key()[0] <= incoming.weight:
            extracted.append(heap.pop()[1].freeze())
        if not extracted:
            pending[vertex] = (heap, best)
            continue

        extracted.sort(key=_list_order)
        entry = _Entry(
            vertex,
            incoming.id,
            incoming.weight,
            sum(s.y for s in extracted),
            children=tuple(extracted),
            redominated=len(extracted) == 1,
        )
        heap.push((entry.x, entry.root), entry)
        if len(heap) == 1:
            best = entry
        pending[vertex] = (heap, best)
        record(vertex, "redominate" if entry.redominated else "collect", entry)

    decomposition = Decomposition(
        root=root, total=tree.total_demand, subtrees=tuple(top),
    )
    logger.debug(
        "recursive decomposition of %r: %d top-level, %d entries",
        tree, len(top), decomposition.entries,
    )
    return decomposition
