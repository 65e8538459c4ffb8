"""
Verification Script for the Worked Examples
Run this to see every solver reproduce the known numbers!

    python scripts/verify_figures.py
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from deployment.decomposition import recursive_decomposition
from deployment.generators import (
    figure1_instance,
    figure1_schedule,
    figure2_input,
    figure4_instance,
    find_exact_cover,
    star_instance,
    xc3_reduction,
)
from deployment.log import setup_logging
from deployment.models import Variant, as_tree
from deployment.oracle import ExactOracle
from deployment.schedule import count_agents
from deployment.tree_solver import solve_noreturn, solve_noreturn_fixed_leaf, solve_return

failures = 0


def check(label: str, got, expected):
    global failures
    if got == expected:
        print(f"✅ {label}: {got}")
    else:
        failures += 1
        print(f"❌ {label}: got {got}, expected {expected}")


def verify_worked_examples():
    setup_logging("WARNING")
    print("🔬 Starting Worked-Example Verification...")
    print("=" * 60)

    # 1. The introductory walk
    print("\n🚶 Introductory instance...")
    fig1 = figure1_instance()
    count = count_agents(fig1, figure1_schedule())
    check("narrated walk total", count.total, 23)
    check("agents left at v5", count.final_unsettled, 4)
    check("no-return optimum", solve_noreturn(as_tree(fig1)).total, 23)
    check("return optimum", solve_return(as_tree(figure1_instance(Variant.RETURN))).total, 25)
    check("oracle agrees", ExactOracle(fig1).solve().optimum, 23)

    # 2. The decomposition example
    print("\n🌳 Decomposition instance...")
    fig4 = figure4_instance()
    dec = recursive_decomposition(fig4)
    check("dominating weights", [s.x for s in dec.subtrees], [12, 10, 9, 7, 4])
    check("y values", [s.y for s in dec.subtrees], [14, 8, 8, 9, 2])
    returning = solve_return(fig4)
    check("return optimum", returning.total, 46)
    check("return trace", list(returning.trace), [(27, 0), (19, 0), (11, 0), (7, 5), (5, 5)])
    check("no-return optimum", solve_noreturn(fig4).total, 41)
    check("ending in b2", solve_noreturn_fixed_leaf(fig4, "b2").total, 43)

    print("-" * 20 + " DECOMPOSITION START " + "-" * 20)
    print(dec.dump())
    print("-" * 20 + "  DECOMPOSITION END  " + "-" * 20)

    # 3. Exact cover
    print("\n🧩 Exact-cover reduction...")
    problem = figure2_input()
    check("cover found", find_exact_cover(problem), (2, 3, 5, 6))
    reduced = xc3_reduction(problem)
    check("reduced optimum equals N", ExactOracle(reduced).solve().optimum, reduced.total_demand)

    # 4. Stars
    print("\n⭐ Stars...")
    check("star(10) with return", solve_return(star_instance(10)).total, 11)

    print("\n" + "=" * 60)
    if failures:
        print(f"❌ {failures} check(s) FAILED")
        return 1
    print("🎉 All worked examples reproduced")
    return 0


if __name__ == "__main__":
    sys.exit(verify_worked_examples())
