"""
General-Graph Solving

- minimum_spanning_tree: Kruskal, ties broken by edge id
- solve_mst_approx: the exact tree optimum on the MST, played on G. Any
  strategy on G needs N agents (N + 1 when returning) and must at some
  point cross an edge of weight at least w*, the heaviest MST edge; the
  tree strategy never needs more than N + w*. Hence total <= 2 * optimum.
- dfs_baseline: a plain depth-first walk, never worse than N + w_max

Usage:
    approx = solve_mst_approx(instance)
    print(approx.total, approx.lower_bound, approx.ratio_certificate)
"""

from dataclasses import dataclass
from typing import Any
import logging

import networkx as nx

from deployment.models import DisconnectedError, Instance, TreeInstance, Variant, as_tree
from deployment.schedule import Schedule, Step, count_agents
from deployment.tree_solver import Method, Solution, solve_tree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ApproxSolution(Solution):
    """
    Solution with its certified gap.

    Attributes:
        lower_bound: A value no strategy on G can beat
        ratio_certificate: total / lower_bound, at most 2
    """
    lower_bound: int = 0
    ratio_certificate: float = 1.0

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data["lower_bound"] = self.lower_bound
        data["ratio_certificate"] = self.ratio_certificate
        return data


def minimum_spanning_tree(instance: Instance) -> TreeInstance:
    """
    Spanning tree of minimum total edge weight, rooted at v_s.

    Raises:
        DisconnectedError: If no spanning tree exists
    """
    components = nx.utils.UnionFind(v.id for v in instance.vertices)
    kept = []
    for edge in sorted(instance.edges, key=lambda e: (e.weight, e.id)):
        if components[edge.u] != components[edge.v]:
            components.union(edge.u, edge.v)
            kept.append(edge)
            if len(kept) == len(instance.vertices) - 1:
                break

    if len(kept) != len(instance.vertices) - 1:
        raise DisconnectedError("instance has no spanning tree")

    spanning = Instance(
        vertices=instance.vertices,
        edges=tuple(kept),
        start=instance.start,
        variant=instance.variant,
    )
    logger.debug(
        "MST keeps %d of %d edges (heaviest %d)",
        len(kept), len(instance.edges), spanning.max_edge_weight,
    )
    return as_tree(spanning)


def solve_mst_approx(instance: Instance, emit: bool = True) -> ApproxSolution:
    """Exact tree solution on the MST of `instance`, with its lower bound."""
    tree = minimum_spanning_tree(instance)
    exact = solve_tree(tree, emit=emit)

    w_star = tree.instance.max_edge_weight
    n = instance.total_demand
    if instance.variant is Variant.RETURN:
        lower = max(n + 1, w_star)
    else:
        lower = max(n, w_star)
    ratio = exact.total / lower if lower else 1.0

    logger.info("MST approximation: total %d, lower bound %d, ratio %.3f", exact.total, lower, ratio)
    return ApproxSolution(
        total=exact.total,
        visit_order=exact.visit_order,
        end_vertex=exact.end_vertex,
        schedule=exact.schedule,
        method=Method.MST_APPROX,
        variant=exact.variant,
        trace=exact.trace,
        lower_bound=lower,
        ratio_certificate=ratio,
    )


def dfs_baseline(instance: Instance) -> Solution:
    """
    Depth-first walk from v_s with backtracking, counted exactly.

    The no-return walk stops at the last newly discovered vertex.
    """
    graph = instance.to_networkx()
    steps: list[Step] = []
    discovered = [instance.start]
    last_new = 0
    for u, v, kind in nx.dfs_labeled_edges(graph, source=instance.start):
        if u == v:
            continue
        edge_id = graph.edges[u, v]["id"]
        if kind == "forward":
            steps.append(Step(edge_id, v))
            discovered.append(v)
            last_new = len(steps)
        elif kind == "reverse":
            steps.append(Step(edge_id, u))

    if instance.variant is Variant.NO_RETURN:
        steps = steps[:last_new]

    schedule = Schedule(start=instance.start, steps=tuple(steps))
    counted = count_agents(instance, schedule)
    logger.info("DFS baseline: %d agents, %d steps", counted.total, len(schedule))
    return Solution(
        total=counted.total,
        visit_order=tuple(discovered),
        end_vertex=schedule.end,
        schedule=schedule,
        method=Method.DFS_BASELINE,
        variant=instance.variant,
    )
