"""
Exact Reference Search

Exponential-time solver for small instances. Every other solver is tested
against it.

A single moving group is enough, and the agents it has settled are fixed
by the set of vertices visited so far. So for a candidate k the state is
the visited set plus where the group stands. Between first visits the group
roams freely over visited vertices along edges it can still cross
(w_e <= k - settled), so "where it stands" is the component of such roaming
around its arrival vertex, not a single vertex.

    state:   (visited mask, roaming component mask)
    move:    from any vertex of the component, cross an edge with
             w_e <= k - settled into an unvisited u with settled + w_u <= k
    goal:    everything visited; for return, v_s inside the final component
             and at least one agent unsettled

The minimum k is found by bisection over trivial_bounds, which is valid
because feasibility is monotone in k.

Usage:
    oracle = ExactOracle(instance)
    result = oracle.solve()
    print(result.optimum, result.states_explored)
"""

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional
import logging

from deployment.config import DEFAULT_ORACLE_CAP
from deployment.models import DeploymentError, Instance, Variant, trivial_bounds
from deployment.schedule import Schedule, Step

logger = logging.getLogger(__name__)


class OracleError(DeploymentError):
    """Raised when the search contradicts its own assumptions."""
    pass


class OracleCapExceededError(OracleError):
    """Raised when the instance has more vertices than the configured cap."""
    pass


@dataclass(frozen=True)
class OracleResult:
    """
    Attributes:
        optimum: Minimum number of agents
        witness: A walk that succeeds with `optimum` agents
        states_explored: Search states over every probed k
        infeasible_below: optimum - 1 (certified infeasible), None if optimum is 0
    """
    optimum: int
    witness: Schedule
    states_explored: int
    infeasible_below: Optional[int]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ExactOracle:
    """
    Exhaustive single-group search for one instance.

    Args:
        instance: Any connected instance with at most `cap` vertices
        cap: Vertex limit (default 20)
        verify_monotone: Also probe optimum + 1 and fail loudly if it is infeasible
    """

    def __init__(self, instance: Instance, cap: Optional[int] = None, verify_monotone: bool = True):
        cap = DEFAULT_ORACLE_CAP if cap is None else cap
        if len(instance.vertices) > cap:
            logger.warning("refusing %d-vertex instance (cap %d)", len(instance.vertices), cap)
            raise OracleCapExceededError(
                f"instance has {len(instance.vertices)} vertices, oracle cap is {cap}"
            )
        self.instance = instance
        self.verify_monotone = verify_monotone
        self.ids = sorted(v.id for v in instance.vertices)
        index = {vid: i for i, vid in enumerate(self.ids)}
        self.n = len(self.ids)
        self.full = (1 << self.n) - 1
        self.start = index[instance.start]
        self.weights = [instance.weight_of[vid] for vid in self.ids]
        self.adjacency: list[list[tuple[int, int, str]]] = [[] for _ in self.ids]
        for edge in sorted(instance.edges, key=lambda e: e.id):
            u, v = index[edge.u], index[edge.v]
            self.adjacency[u].append((v, edge.weight, edge.id))
            self.adjacency[v].append((u, edge.weight, edge.id))
        self.min_incident = [min((w for _, w, _ in adj), default=0) for adj in self.adjacency]
        self.w_max = instance.max_edge_weight
        self.returning = instance.variant is Variant.RETURN
        self.states_explored = 0

    # -------------------------------------------------------------------------
    # Public API
    # -------------------------------------------------------------------------

    def feasible(self, k: int) -> Optional[Schedule]:
        """A walk that succeeds with exactly k agents, or None."""
        witness, states = self._search(k)
        self.states_explored += states
        logger.debug("k=%d feasible=%s states=%d", k, witness is not None, states)
        return witness

    def solve(self) -> OracleResult:
        """Minimum k by bisection, with its witness."""
        lo, hi = trivial_bounds(self.instance)
        witness = self.feasible(hi)
        if witness is None:
            raise OracleError(f"upper bound {hi} is infeasible; trivial bounds are broken")

        best, best_witness = hi, witness
        max_infeasible = lo - 1
        while lo < best:
            mid = (lo + best) // 2
            found = self.feasible(mid)
            if found is None:
                max_infeasible = max(max_infeasible, mid)
                lo = mid + 1
            else:
                best, best_witness = mid, found

        if best <= max_infeasible:
            raise OracleError(f"feasibility is not monotone: {best} works, {max_infeasible} does not")
        if self.verify_monotone and best < hi and self.feasible(best + 1) is None:
            raise OracleError(f"feasibility is not monotone: {best} works, {best + 1} does not")

        logger.info("oracle optimum %d (%d states)", best, self.states_explored)
        return OracleResult(
            optimum=best,
            witness=best_witness,
            states_explored=self.states_explored,
            infeasible_below=best - 1 if best > 0 else None,
        )

    # -------------------------------------------------------------------------
    # Search
    # -------------------------------------------------------------------------

    def _search(self, k: int) -> tuple[Optional[Schedule], int]:
        n_total = self.instance.total_demand
        if k < n_total or (self.returning and k - n_total < 1):
            return None, 0

        s = self.start
        settled = self.weights[s]
        mask = 1 << s
        comp = self._component(mask, s, k - settled)
        parents: dict[tuple[int, int], Optional[tuple[tuple[int, int], int, int]]] = {
            (mask, comp): None
        }
        stack = [(mask, comp, settled)]

        while stack:
            mask, comp, settled = stack.pop()
            threshold = k - settled
            if mask == self.full:
                if not self.returning or comp >> s & 1:
                    return self._witness(parents, (mask, comp), k), len(parents)
                continue
            if self._dead(mask, threshold):
                continue

            for c in _bits(comp):
                for u, w, _ in self.adjacency[c]:
                    if mask >> u & 1 or w > threshold:
                        continue
                    now_settled = settled + self.weights[u]
                    if now_settled > k:
                        continue
                    now_mask = mask | (1 << u)
                    key = (now_mask, self._component(now_mask, u, k - now_settled))
                    if key in parents:
                        continue
                    parents[key] = ((mask, comp), c, u)
                    stack.append((key[0], key[1], now_settled))

        return None, len(parents)

    def _component(self, mask: int, vertex: int, threshold: int) -> int:
        """Visited vertices reachable from `vertex` over edges of weight <= threshold."""
        if threshold >= self.w_max:
            return mask
        comp = 1 << vertex
        stack = [vertex]
        while stack:
            c = stack.pop()
            for u, w, _ in self.adjacency[c]:
                bit = 1 << u
                if mask & bit and not comp & bit and w <= threshold:
                    comp |= bit
                    stack.append(u)
        return comp

    def _dead(self, mask: int, threshold: int) -> bool:
        """Some unvisited vertex has no edge the group can still cross."""
        return any(self.min_incident[u] > threshold for u in _bits(self.full & ~mask))

    # -------------------------------------------------------------------------
    # Witness reconstruction
    # -------------------------------------------------------------------------

    def _witness(self, parents, key, k: int) -> Schedule:
        moves = []
        while parents[key] is not None:
            previous, c, u = parents[key]
            moves.append((previous[0], c, u))
            key = previous
        moves.reverse()

        steps: list[Step] = []
        position = self.start
        for mask, c, u in moves:
            threshold = k - self._settled(mask)
            steps.extend(self._path(mask, threshold, position, c))
            steps.append(Step(self._edge_id(c, u), self.ids[u]))
            position = u
        if self.returning:
            steps.extend(self._path(self.full, k - self.instance.total_demand, position, self.start))
        return Schedule(start=self.ids[self.start], steps=tuple(steps))

    def _settled(self, mask: int) -> int:
        return sum(self.weights[i] for i in _bits(mask))

    def _edge_id(self, a: int, b: int) -> str:
        return next(eid for u, _, eid in self.adjacency[a] if u == b)

    def _path(self, mask: int, threshold: int, source: int, target: int) -> list[Step]:
        """Breadth-first path inside `mask` using edges of weight <= threshold."""
        if source == target:
            return []
        previous = {source: None}
        queue = deque([source])
        while queue:
            c = queue.popleft()
            if c == target:
                break
            for u, w, eid in self.adjacency[c]:
                if mask >> u & 1 and w <= threshold and u not in previous:
                    previous[u] = (c, eid)
                    queue.append(u)
        if target not in previous:
            raise OracleError(f"no roaming path from '{self.ids[source]}' to '{self.ids[target]}'")

        steps = []
        vertex = target
        while previous[vertex] is not None:
            c, eid = previous[vertex]
            steps.append(Step(eid, self.ids[vertex]))
            vertex = c
        steps.reverse()
        return steps


def exact_min_agents(instance: Instance, cap: Optional[int] = None) -> int:
    """Minimum number of agents for `instance`'s variant."""
    return ExactOracle(instance, cap=cap).solve().optimum


def exact_schedule(instance: Instance, k: int, cap: Optional[int] = None) -> Optional[Schedule]:
    """A walk that succeeds with k agents, or None if k is infeasible."""
    return ExactOracle(instance, cap=cap).feasible(k)
