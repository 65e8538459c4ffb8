"""
Timing and Growth Checks

These tests verify that:
1. Both tree solvers handle a 10^5-vertex random tree in under 5 seconds
2. Doubling n from 2^14 to 2^17 grows the solve time by at most 2.4x per step
3. Zigzag walks grow quadratically while the optimum stays m + 1

Run with: pytest tests/deployment/test_bench.py -v
Skip with: pytest -m "not slow"
"""

import math
import time
from statistics import linear_regression

import pytest

from deployment.generators import random_tree, zigzag_instance
from deployment.models import Variant
from deployment.oracle import exact_min_agents
from deployment.tree_solver import solve_noreturn, solve_return, solve_tree

pytestmark = pytest.mark.slow

SOLVERS = {"return": (solve_return, Variant.RETURN), "no_return": (solve_noreturn, Variant.NO_RETURN)}


def _best_time(solver, tree, repeats: int = 3) -> float:
    """Fastest of a few totals-only runs, in seconds."""
    best = math.inf
    for _ in range(repeats):
        started = time.perf_counter()
        solver(tree, emit=False)
        best = min(best, time.perf_counter() - started)
    return best


# =============================================================================
# Running time
# =============================================================================

class TestSolverTiming:
    """Totals-only solves on large random trees."""

    @pytest.mark.parametrize("name", SOLVERS)
    def test_hundred_thousand_vertices(self, name):
        """n = 10^5 finishes in under 5 seconds."""
        solver, variant = SOLVERS[name]
        tree = random_tree(100_000, seed=1, variant=variant)

        started = time.perf_counter()
        solution = solver(tree, emit=False)
        elapsed = time.perf_counter() - started

        assert solution.total >= tree.total_demand
        assert elapsed < 5.0

    @pytest.mark.parametrize("name", SOLVERS)
    def test_doubling_ratio(self, name):
        """Each doubling from 2^14 to 2^17 costs at most 2.4 times the previous size."""
        solver, variant = SOLVERS[name]
        times = [
            _best_time(solver, random_tree(2 ** e, seed=e, variant=variant))
            for e in range(14, 18)
        ]

        for smaller, larger in zip(times, times[1:]):
            assert larger / smaller <= 2.4


# =============================================================================
# Zigzag family
# =============================================================================

class TestZigzagGrowth:
    """Optimal walks on the zigzag family are long."""

    def test_walk_length_exponent(self):
        """log(schedule length) against log(m) has slope at least 1.8 over m = 4..64."""
        sizes = [4, 8, 16, 32, 64]
        lengths = []
        for m in sizes:
            solution = solve_tree(zigzag_instance(m))
            assert solution.total == m + 1
            lengths.append(len(solution.schedule))

        slope, _ = linear_regression([math.log(m) for m in sizes], [math.log(n) for n in lengths])
        assert slope >= 1.8

    @pytest.mark.parametrize("m", range(1, 7))
    def test_optimum_matches_oracle(self, m):
        """The oracle agrees that m + 1 agents are optimal."""
        tree = zigzag_instance(m)

        assert exact_min_agents(tree.instance) == m + 1
        assert solve_return(tree, emit=False).total == m + 1
