"""
Instance Generators

Fixtures for the worked examples, the exact-cover reduction, adversarial
families and seeded random instances.

Families:
- figure1_instance / figure1_schedule: the 5-vertex introductory example
- figure4_instance: the 14-vertex decomposition example (N = 41)
- star_instance: leaves must be visited by decreasing edge weight
- uniform_gap_instance: star with prescribed, pairwise distinct edge weights
- zigzag_instance: optimum m + 1, but the walk must alternate sides
- xc3_reduction: exact cover by 3-sets, optimum N iff a cover exists
- random_tree / random_graph: seeded, reproducible

Usage:
    tree = figure4_instance()
    instance = xc3_reduction(figure2_input())
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional
import logging
import random

from deployment.models import Edge, Instance, TreeInstance, Variant, Vertex, as_tree
from deployment.schedule import Schedule

logger = logging.getLogger(__name__)


# =============================================================================
# Worked examples
# =============================================================================

def figure1_instance(variant: Variant = Variant.NO_RETURN) -> Instance:
    """v1..v5, N = 19; optimum 23 without return, 25 with return."""
    return Instance.create(
        vertices=[("v1", 1), ("v2", 1), ("v3", 1), ("v4", 1), ("v5", 15)],
        edges=[
            ("e1", "v1", "v2", 1),
            ("e2", "v2", "v3", 20),
            ("e3", "v1", "v4", 1),
            ("e4", "v2", "v5", 7),
        ],
        start="v1",
        variant=variant,
    )


def figure1_schedule() -> Schedule:
    """The narrated no-return walk on figure1_instance: 23 agents, 4 left unsettled."""
    return Schedule.create("v1", [
        ("e1", "v2"), ("e2", "v3"), ("e2", "v2"), ("e1", "v1"),
        ("e3", "v4"), ("e3", "v1"), ("e1", "v2"), ("e4", "v5"),
    ])


def figure4_instance(variant: Variant = Variant.RETURN) -> TreeInstance:
    """
    Decomposition example with N = 41.

    Dominating edges in decreasing order: e7 (12), e5 (10), e3 (9), e4 (7), e2 (4).
    Return optimum 46; no-return optimum 41, ending at b5.
    """
    instance = Instance.create(
        vertices=[
            ("vs", 4), ("v1", 5), ("v2", 2), ("v3", 1), ("v4", 5), ("v5", 1),
            ("b0", 2), ("b1", 3), ("b2", 2), ("b3", 2), ("b4", 2),
            ("b5", 9), ("b6", 2), ("b7", 1),
        ],
        edges=[
            ("e1", "vs", "v1", 5),
            ("e2", "vs", "b0", 4),
            ("e3", "v1", "b1", 9),
            ("e4", "vs", "v2", 7),
            ("e5", "vs", "v3", 10),
            ("e6", "v2", "b5", 6),
            ("e7", "v2", "v4", 12),
            ("e8", "v4", "b6", 1),
            ("e9", "v4", "b7", 3),
            ("e10", "v3", "b4", 3),
            ("e11", "v3", "v5", 2),
            ("e12", "v5", "b2", 1),
            ("e13", "v5", "b3", 1),
        ],
        start="vs",
        variant=variant,
    )
    return as_tree(instance)


# =============================================================================
# Star families
# =============================================================================

def star_instance(n: int, variant: Variant = Variant.RETURN) -> TreeInstance:
    """Center s (demand 0), leaves l1..ln (demand 1), edge ei of weight n - i + 1."""
    if n < 1:
        raise ValueError(f"star needs at least one leaf, got {n}")
    return as_tree(Instance.create(
        vertices=[("s", 0)] + [(f"l{i}", 1) for i in range(1, n + 1)],
        edges=[(f"e{i}", "s", f"l{i}", n - i + 1) for i in range(1, n + 1)],
        start="s",
        variant=variant,
    ))


def uniform_gap_instance(
    values: Iterable[int],
    eps: int,
    variant: Variant = Variant.RETURN,
) -> TreeInstance:
    """
    Star with edge weights `values` and leaf demands `eps`.

    Without return, the leaf behind the smallest value instead demands that
    value, so the walk cannot profit from ending there.
    """
    values = list(values)
    if not values:
        raise ValueError("values must not be empty")
    if len(set(values)) != len(values):
        raise ValueError(f"values must be pairwise distinct, got {values}")
    if any(v < 1 for v in values):
        raise ValueError(f"values must be positive, got {values}")
    if eps < 1:
        raise ValueError(f"eps must be positive, got {eps}")

    smallest = min(values)
    vertices = [("s", 0)]
    for i, value in enumerate(values, start=1):
        demand = value if variant is Variant.NO_RETURN and value == smallest else eps
        vertices.append((f"l{i}", demand))
    return as_tree(Instance.create(
        vertices=vertices,
        edges=[(f"e{i}", "s", f"l{i}", value) for i, value in enumerate(values, start=1)],
        start="s",
        variant=variant,
    ))


def zigzag_instance(m: int, variant: Variant = Variant.RETURN) -> TreeInstance:
    """
    Two free spines s-L1-...-Lm and s-R1-...-Rm with m unit pendants.

    Pendant p_k hangs off Lm for odd k and Rm for even k, behind an edge of
    weight m - k + 1. Visiting pendants by decreasing weight is forced, so
    the optimal walk crosses from one spine end to the other m - 1 times.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    vertices = [("s", 0)]
    edges = []
    for side in ("L", "R"):
        previous = "s"
        for i in range(1, m + 1):
            vertices.append((f"{side}{i}", 0))
            edges.append((f"{side.lower()}{i}", previous, f"{side}{i}", 0))
            previous = f"{side}{i}"
    for k in range(1, m + 1):
        anchor = f"L{m}" if k % 2 else f"R{m}"
        vertices.append((f"p{k}", 1))
        edges.append((f"q{k}", anchor, f"p{k}", m - k + 1))
    return as_tree(Instance.create(vertices=vertices, edges=edges, start="s", variant=variant))


# =============================================================================
# Exact cover by 3-sets
# =============================================================================

@dataclass(frozen=True)
class XC3Input:
    """
    Ground set {1, ..., 3n} and m subsets of exactly three elements.

    Example:
        >>> XC3Input(1, (frozenset({1, 2, 3}),)).m
        1
    """
    n: int
    subsets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if len(self.subsets) < self.n:
            raise ValueError(f"need at least n={self.n} subsets, got {len(self.subsets)}")
        for i, subset in enumerate(self.subsets, start=1):
            if len(subset) != 3:
                raise ValueError(f"F{i} must have exactly 3 elements, got {sorted(subset)}")
            outside = [x for x in subset if not 1 <= x <= 3 * self.n]
            if outside:
                raise ValueError(f"F{i} has elements outside 1..{3 * self.n}: {sorted(outside)}")

    @property
    def m(self) -> int:
        return len(self.subsets)

    @classmethod
    def create(cls, n: int, subsets: Iterable[Iterable[int]]) -> "XC3Input":
        return cls(n=n, subsets=tuple(frozenset(s) for s in subsets))


def figure2_input() -> XC3Input:
    """n = 4, m = 6; F2, F3, F5, F6 is an exact cover."""
    return XC3Input.create(4, [
        {1, 2, 3}, {1, 2, 4}, {3, 5, 7}, {5, 8, 9}, {6, 8, 10}, {9, 11, 12},
    ])


def find_exact_cover(problem: XC3Input) -> Optional[tuple[int, ...]]:
    """1-based indices of n disjoint subsets covering the ground set, or None."""
    ground = frozenset(range(1, 3 * problem.n + 1))
    for chosen in combinations(range(problem.m), problem.n):
        union = frozenset().union(*(problem.subsets[i] for i in chosen))
        if union == ground:
            return tuple(i + 1 for i in chosen)
    return None


def xc3_reduction(problem: XC3Input, variant: Variant = Variant.NO_RETURN) -> Instance:
    """
    Deployment instance whose optimum is N exactly when `problem` has an exact cover.

    Sink s (demand 0) joined by free edges to set vertices F1..Fm (demand 1);
    Fj joined to its three element vertices x_i (demand 1) by edges of weight
    m - n + 1. Without return a dummy d (demand 1) hangs off s, so the walk
    cannot end in an element. With return there is no dummy and the element
    edges weigh m - n.
    """
    n, m = problem.n, problem.m
    heavy = m - n + 1 if variant is Variant.NO_RETURN else m - n

    vertices = [("s", 0)]
    vertices += [(f"F{j}", 1) for j in range(1, m + 1)]
    vertices += [(f"x{i}", 1) for i in range(1, 3 * n + 1)]
    edges = [(f"s-F{j}", "s", f"F{j}", 0) for j in range(1, m + 1)]
    for j, subset in enumerate(problem.subsets, start=1):
        edges += [(f"F{j}-x{i}", f"F{j}", f"x{i}", heavy) for i in sorted(subset)]
    if variant is Variant.NO_RETURN:
        vertices.append(("d", 1))
        edges.append(("s-d", "s", "d", 0))

    logger.debug("3XC reduction: n=%d m=%d, %d vertices, %d edges", n, m, len(vertices), len(edges))
    return Instance.create(vertices=vertices, edges=edges, start="s", variant=variant)


# =============================================================================
# Transformations
# =============================================================================

def subdivide_edge(instance: Instance, edge_id: str, pieces: int) -> Instance:
    """
    Replace an edge by a path of `pieces` edges of the same weight through
    new zero-demand vertices. The optimum is unchanged.
    """
    if pieces < 1:
        raise ValueError(f"pieces must be positive, got {pieces}")
    if edge_id not in instance.edge_by_id:
        raise ValueError(f"unknown edge '{edge_id}'")
    if pieces == 1:
        return instance

    target = instance.edge_by_id[edge_id]
    inner = [f"{edge_id}~v{i}" for i in range(1, pieces)]
    chain = [target.u] + inner + [target.v]
    new_edges = tuple(
        Edge(f"{edge_id}~{i}", a, b, target.weight)
        for i, (a, b) in enumerate(zip(chain, chain[1:]), start=1)
    )
    return Instance(
        vertices=instance.vertices + tuple(Vertex(v, 0) for v in inner),
        edges=tuple(e for e in instance.edges if e.id != edge_id) + new_edges,
        start=instance.start,
        variant=instance.variant,
    )


# =============================================================================
# Random instances
# =============================================================================

def random_tree(
    n: int,
    seed: int,
    weight_max: int = 8,
    variant: Variant = Variant.NO_RETURN,
) -> TreeInstance:
    """Random recursive tree on v0..v{n-1} rooted at v0, weights uniform in [0, weight_max]."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    rng = random.Random(seed)
    vertices = [(f"v{i}", rng.randint(0, weight_max)) for i in range(n)]
    edges = [
        (f"e{i}", f"v{rng.randrange(i)}", f"v{i}", rng.randint(0, weight_max))
        for i in range(1, n)
    ]
    return as_tree(Instance.create(vertices=vertices, edges=edges, start="v0", variant=variant))


def random_graph(
    n: int,
    edge_prob: float,
    seed: int,
    weight_max: int = 8,
    variant: Variant = Variant.NO_RETURN,
) -> Instance:
    """
    Random connected graph: a random recursive spanning tree plus every
    other vertex pair independently with probability `edge_prob`.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    rng = random.Random(seed)
    vertices = [(f"v{i}", rng.randint(0, weight_max)) for i in range(n)]
    tree_pairs = {(rng.randrange(i), i) for i in range(1, n)}
    pairs = sorted(tree_pairs)
    for j in range(1, n):
        for i in range(j):
            if (i, j) not in tree_pairs and rng.random() < edge_prob:
                pairs.append((i, j))
    edges = [
        (f"e{k}", f"v{i}", f"v{j}", rng.randint(0, weight_max))
        for k, (i, j) in enumerate(pairs, start=1)
    ]
    return Instance.create(vertices=vertices, edges=edges, start="v0", variant=variant)
