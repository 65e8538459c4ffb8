"""
Exact Tree Solvers

Return variant:
    Visit the top-level collected subtrees in decreasing dominating-edge
    weight, each fully explored and left. The count accumulates, per subtree,
    its y value (remaining demand plus the unmarked path back), topping up
    `curr` whenever it falls below the dominating edge weight.

No-return variant:
    The walk ends in some leaf b_t. At every level of the recursive
    decomposition the solver picks one collected subtree to descend into
    last; all others are visited first in decreasing x. For each choice the
    binding crossings are
      - leaving an earlier sibling i:   settled_after(i) + x_i
      - entering the chosen subtree C:  N - core(C) + x_C
      - whatever the best choice inside C costs
    Later siblings never bind because their exit crossings are bounded by
    the entry term of C. The minimum over choices is computed bottom-up in
    one pass over the decomposition; no leaf is re-solved.

Every solver can emit the walk and re-count it; a mismatch is an internal
error, never a silently wrong answer.

Usage:
    tree = as_tree(instance)
    solution = solve_tree(tree)
    print(solution.total, solution.end_vertex)
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional, Sequence
import logging

from deployment.decomposition import (
    CollectedSubtree,
    Decomposition,
    NotALeafError,
    recursive_decomposition,
    top_decomposition,
)
from deployment.models import DeploymentError, TreeInstance, Variant
from deployment.schedule import Schedule, Step, count_agents, verify_coverage

logger = logging.getLogger(__name__)


class OrderError(DeploymentError):
    """Raised when a visit order is not a permutation of the tree's leaves."""
    pass


class SolverInvariantError(DeploymentError):
    """Raised when an emitted schedule does not reproduce the computed total."""
    pass


class Method(Enum):
    TREE_RETURN = "tree-return"
    TREE_NORETURN = "tree-noreturn"
    TREE_NORETURN_FIXED = "tree-noreturn-fixed-leaf"
    MST_APPROX = "mst-approx"
    DFS_BASELINE = "dfs-baseline"


# =============================================================================
# Models
# =============================================================================

@dataclass(frozen=True)
class Solution:
    """
    An agent count with the strategy that achieves it.

    Attributes:
        total: Number of agents
        visit_order: Leaves in the order they are first reached
        end_vertex: v_s for return, the final leaf for no-return
        schedule: The explicit walk, if emitted
        method: Which solver produced it
        variant: Variant the total is valid for
        trace: Solver-specific (curr, add) checkpoints
    """
    total: int
    visit_order: tuple[str, ...]
    end_vertex: str
    schedule: Optional[Schedule]
    method: Method
    variant: Variant
    trace: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "total": self.total,
            "end": self.end_vertex,
            "order": list(self.visit_order),
            "method": self.method.value,
            "variant": self.variant.value,
        }
        if self.schedule is not None:
            data["schedule"] = self.schedule.to_dict()
        if self.trace:
            data["trace"] = [list(t) for t in self.trace]
        return data


# =============================================================================
# Return variant
# =============================================================================

def solve_return(
    tree: TreeInstance,
    emit: bool = True,
    decomposition: Optional[Decomposition] = None,
) -> Solution:
    """
    Optimal agent count for walks that must come back to v_s.

    Args:
        tree: Rooted tree
        emit: Build the walk and re-count it
        decomposition: A precomputed top_decomposition of `tree`
    """
    decomposition = decomposition or top_decomposition(tree)
    n = tree.total_demand

    curr = n
    add = 0
    trace = []
    for subtree in decomposition.subtrees:
        curr -= subtree.y
        if curr < subtree.x:
            add += subtree.x - curr
            curr = subtree.x
        trace.append((curr, add))

    total = n + add
    if add == 0:
        total += 1      # everything settled; someone still has to walk home

    order = tuple(leaf for subtree in decomposition.subtrees for leaf in subtree.members)
    solution = Solution(
        total=total,
        visit_order=order,
        end_vertex=tree.root,
        schedule=None,
        method=Method.TREE_RETURN,
        variant=Variant.RETURN,
        trace=tuple(trace),
    )
    logger.info("return optimum %d for %r (%d subtrees)", total, tree, len(decomposition.subtrees))
    return _finish(tree, solution, emit)


# =============================================================================
# No-return variant
# =============================================================================

def solve_noreturn(
    tree: TreeInstance,
    emit: bool = True,
    decomposition: Optional[Decomposition] = None,
) -> Solution:
    """
    Optimal agent count over every choice of final leaf.

    Args:
        tree: Rooted tree
        emit: Build the walk and re-count it
        decomposition: A precomputed recursive_decomposition of `tree`
    """
    decomposition = decomposition or recursive_decomposition(tree)
    n = tree.total_demand
    if not decomposition.subtrees:
        return _finish(tree, _empty_noreturn(tree, Method.TREE_NORETURN), emit)

    # children before parents
    best: dict[CollectedSubtree, int] = {}
    choice: dict[CollectedSubtree, int] = {}
    for unit in reversed(list(decomposition.walk())):
        if not unit.children:
            best[unit] = n
            continue
        best[unit], choice[unit] = _best_descent(n, n - unit.core, unit.children, best)
    total, first = _best_descent(n, 0, decomposition.subtrees, best)

    order = []
    siblings, j = decomposition.subtrees, first
    while True:
        _extend_left(tree, order, siblings, j)
        chosen = siblings[j]
        if not chosen.children:
            order.extend(_preorder_members(tree, chosen))
            break
        siblings, j = chosen.children, choice[chosen]

    solution = Solution(
        total=total,
        visit_order=tuple(order),
        end_vertex=order[-1],
        schedule=None,
        method=Method.TREE_NORETURN,
        variant=Variant.NO_RETURN,
    )
    logger.info("no-return optimum %d for %r, ending at %s", total, tree, order[-1])
    return _finish(tree, solution, emit)


def solve_noreturn_fixed_leaf(
    tree: TreeInstance,
    b_t: str,
    emit: bool = True,
    decomposition: Optional[Decomposition] = None,
) -> Solution:
    """
    Optimal no-return strategy that visits leaf `b_t` last.

    At each level: collected subtrees other than the one holding b_t, in
    decreasing x; then recurse into the one holding b_t.

    Raises:
        NotALeafError: If b_t is not a leaf
    """
    if b_t not in tree.children or not tree.is_leaf(b_t):
        raise NotALeafError(f"'{b_t}' is not a leaf of the tree rooted at '{tree.root}'")
    decomposition = decomposition or recursive_decomposition(tree)
    n = tree.total_demand

    # chain of units from the top level down to b_t's own unit
    parent_unit: dict[CollectedSubtree, Optional[CollectedSubtree]] = {}
    target = None
    for unit in decomposition.subtrees:
        parent_unit[unit] = None
    for unit in decomposition.walk():
        for child in unit.children:
            parent_unit[child] = unit
        if unit.leaf == b_t:
            target = unit
    chain = []
    while target is not None:
        chain.append(target)
        target = parent_unit[target]
    chain.reverse()

    total = n
    trace = []
    order: list[str] = []
    siblings = decomposition.subtrees
    base = 0
    for unit in chain:
        j = next(i for i, s in enumerate(siblings) if s is unit)
        settled = base
        prefix_max = None
        for s in siblings[:j]:
            settled += s.y
            prefix_max = settled + s.x if prefix_max is None else max(prefix_max, settled + s.x)
        term = n - unit.core + unit.x
        if prefix_max is not None:
            term = max(term, prefix_max)
        total = max(total, term)
        trace.append((term, total - n))
        _extend_left(tree, order, siblings, j)
        siblings, base = unit.children, n - unit.core
    order.append(b_t)

    solution = Solution(
        total=total,
        visit_order=tuple(order),
        end_vertex=b_t,
        schedule=None,
        method=Method.TREE_NORETURN_FIXED,
        variant=Variant.NO_RETURN,
        trace=tuple(trace),
    )
    logger.info("no-return total %d for %r with final leaf %s", total, tree, b_t)
    return _finish(tree, solution, emit)


def solve_tree(tree: TreeInstance, emit: bool = True) -> Solution:
    """Dispatch on the tree's variant."""
    if tree.variant is Variant.RETURN:
        return solve_return(tree, emit=emit)
    return solve_noreturn(tree, emit=emit)


# =============================================================================
# Schedule emission
# =============================================================================

def emit_schedule(
    tree: TreeInstance,
    order: Sequence[str],
    variant: Optional[Variant] = None,
) -> Schedule:
    """
    Walk the tree visiting the leaves in `order`.

    Consecutive leaves are joined through their lowest common ancestor, so
    each collected subtree visited as a block is explored depth-first. The
    return variant finally walks back to the root.

    Raises:
        OrderError: If `order` is not a permutation of the leaves
    """
    variant = variant or tree.variant
    if len(order) != len(tree.leaves) or set(order) != set(tree.leaves):
        extra = sorted(set(order) - set(tree.leaves))
        missing = sorted(set(tree.leaves) - set(order))
        raise OrderError(
            f"visit order must list every leaf exactly once "
            f"(not leaves: {extra}, missing: {missing}, length {len(order)} vs {len(tree.leaves)})"
        )

    steps: list[Step] = []
    position = tree.root
    for leaf in order:
        _walk_between(tree, position, leaf, steps)
        position = leaf
    if variant is Variant.RETURN:
        _walk_between(tree, position, tree.root, steps)
    return Schedule(start=tree.root, steps=tuple(steps))


# =============================================================================
# Helpers
# =============================================================================

def _best_descent(
    n: int,
    base: int,
    children: Sequence[CollectedSubtree],
    best: dict[CollectedSubtree, int],
) -> tuple[int, int]:
    """(cost, index) of the cheapest child to descend into last; first index wins ties."""
    settled = base
    prefix_max = None
    cost, index = None, -1
    for j, child in enumerate(children):
        candidate = max(n - child.core + child.x, best[child])
        if prefix_max is not None:
            candidate = max(candidate, prefix_max)
        if cost is None or candidate < cost:
            cost, index = candidate, j
        settled += child.y
        prefix_max = settled + child.x if prefix_max is None else max(prefix_max, settled + child.x)
    return cost, index


def _preorder_members(tree: TreeInstance, unit: CollectedSubtree) -> list[str]:
    return sorted(unit.members, key=tree.preorder_index.__getitem__)


def _extend_left(
    tree: TreeInstance,
    order: list[str],
    siblings: Sequence[CollectedSubtree],
    skip: int,
) -> None:
    for i, sibling in enumerate(siblings):
        if i != skip:
            order.extend(_preorder_members(tree, sibling))


def _walk_between(tree: TreeInstance, source: str, target: str, steps: list[Step]) -> None:
    """Append the tree path source -> target to `steps`."""
    depth = tree.depth
    down = []
    a, b = source, target
    while depth[a] > depth[b]:
        steps.append(Step(tree.parent_edge[a].id, tree.parent[a]))
        a = tree.parent[a]
    while depth[b] > depth[a]:
        down.append(b)
        b = tree.parent[b]
    while a != b:
        steps.append(Step(tree.parent_edge[a].id, tree.parent[a]))
        a = tree.parent[a]
        down.append(b)
        b = tree.parent[b]
    for vertex in reversed(down):
        steps.append(Step(tree.parent_edge[vertex].id, vertex))


def _empty_noreturn(tree: TreeInstance, method: Method) -> Solution:
    return Solution(
        total=tree.total_demand,
        visit_order=(),
        end_vertex=tree.root,
        schedule=None,
        method=method,
        variant=Variant.NO_RETURN,
    )


def _finish(tree: TreeInstance, solution: Solution, emit: bool) -> Solution:
    """Attach the walk and check it reproduces the total."""
    if not emit:
        return solution

    schedule = emit_schedule(tree, solution.visit_order, solution.variant)
    counted = count_agents(tree.instance, schedule, solution.variant)
    coverage = verify_coverage(tree.instance, schedule, solution.variant)
    if counted.total != solution.total or not coverage.accepted:
        raise SolverInvariantError(
            f"{solution.method.value}: computed {solution.total} agents but the emitted walk "
            f"needs {counted.total} (coverage accepted: {coverage.accepted})"
        )
    logger.debug("%s: emitted %d steps, recount matches", solution.method.value, len(schedule))
    return replace(solution, schedule=schedule)
