from dotenv import load_dotenv
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional
import argparse
import csv
import json
import sys
import time

from deployment.config import DeployConfig
from deployment.decomposition import recursive_decomposition
from deployment.generators import (
    XC3Input,
    figure1_instance,
    figure2_input,
    figure4_instance,
    random_graph,
    random_tree,
    star_instance,
    uniform_gap_instance,
    xc3_reduction,
    zigzag_instance,
)
from deployment.graph_solver import solve_mst_approx
from deployment.log import setup_logging
from deployment.models import (
    DeploymentError,
    Instance,
    Variant,
    as_tree,
    parse_instance,
    serialize_instance,
)
from deployment.oracle import ExactOracle, OracleCapExceededError
from deployment.schedule import (
    count_agents,
    parse_schedule,
    serialize_schedule,
    verify_coverage,
)
from deployment.tree_solver import Solution, solve_noreturn_fixed_leaf, solve_tree


load_dotenv()

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2
EXIT_NOT_A_TREE = 3
EXIT_CAP_EXCEEDED = 4
EXIT_OUTPUT = 5

FAMILIES = ["fig1", "fig4", "star", "uniform-gap", "zigzag", "xc3", "random-tree", "random-graph"]
BENCH_FAMILIES = ["random-tree", "random-graph", "star", "zigzag"]
BENCH_COLUMNS = ["family", "n", "seed", "total", "solve_time_ns", "schedule_len"]


# === UI / Formatting ===
class Colors:
    RED = '\033[91m'
    YELLOW = '\033[93m'
    DIM = '\033[2m'
    ENDC = '\033[0m'

def print_error(message: str):
    print(f"{Colors.RED}error:{Colors.ENDC} {message}", file=sys.stderr)

def print_warning(message: str):
    print(f"{Colors.YELLOW}warning:{Colors.ENDC} {message}", file=sys.stderr)

def print_report(report: dict[str, Any], as_json: bool):
    """One `key: value` per line, or a single JSON object."""
    if as_json:
        print(json.dumps(report, indent=2))
        return
    for key, value in report.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, dict):
            value = json.dumps(value, separators=(",", ":"))
        elif isinstance(value, bool):
            value = str(value).lower()
        print(f"{key}: {value}")


def read_instance(path: str) -> Instance:
    return parse_instance(Path(path).read_text())


# === Commands ===

def cmd_solve(args: argparse.Namespace, config: DeployConfig) -> int:
    instance = read_instance(args.input)

    method = args.method
    if method == "auto":
        method = "tree" if instance.is_tree else "mst-approx"
    if method == "tree" and not instance.is_tree:
        print_error(f"--method tree needs a tree; {args.input} has {len(instance.edges)} edges "
                    f"on {len(instance.vertices)} vertices")
        return EXIT_NOT_A_TREE

    emit = args.emit_schedule
    limit = config.solver.emit_schedule_max_vertices
    if emit and len(instance.vertices) > limit and not args.force:
        print_warning(f"not emitting a schedule for {len(instance.vertices)} vertices "
                      f"(limit {limit}); pass --force to override")
        emit = False

    if args.end_leaf and method != "tree":
        print_error("--end-leaf needs a tree instance")
        return EXIT_NOT_A_TREE
    if args.end_leaf and instance.variant is not Variant.NO_RETURN:
        print_error(f"--end-leaf needs a no_return instance; {args.input} is "
                    f"'{instance.variant.value}'")
        return EXIT_INPUT

    solution: Solution
    if method == "tree":
        tree = as_tree(instance)
        if args.end_leaf:
            solution = solve_noreturn_fixed_leaf(tree, args.end_leaf, emit=emit)
        else:
            solution = solve_tree(tree, emit=emit)
    else:
        solution = solve_mst_approx(instance, emit=emit)

    report = solution.to_dict()
    if not args.json:
        report.pop("trace", None)
    if args.dump_decomposition:
        if method != "tree":
            print_warning("--dump-decomposition only applies to tree instances")
        else:
            dump = recursive_decomposition(as_tree(instance)).dump()
            if args.json:
                report["decomposition"] = dump.splitlines()
            else:
                print_report(report, as_json=False)
                print("decomposition:")
                print(dump)
                return EXIT_OK
    print_report(report, args.json)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, config: DeployConfig) -> int:
    instance = read_instance(args.input)
    schedule = parse_schedule(Path(args.schedule).read_text())
    variant = Variant(args.variant) if args.variant else instance.variant

    count = count_agents(instance, schedule, variant)
    coverage = verify_coverage(instance, schedule, variant)
    print_report({
        "total": count.total,
        "add": count.add,
        "final_unsettled": count.final_unsettled,
        "variant": variant.value,
        "covered": coverage.covered,
        "ends_at_start": coverage.ends_at_start,
        "missing": list(coverage.missing),
        "accepted": coverage.accepted,
    }, args.json)
    return EXIT_OK if coverage.accepted else EXIT_REJECTED


def cmd_generate(args: argparse.Namespace, config: DeployConfig) -> int:
    variant = Variant(args.variant) if args.variant else None
    family = args.family

    if family == "fig1":
        instance = figure1_instance(variant or Variant.NO_RETURN)
    elif family == "fig4":
        instance = figure4_instance(variant or Variant.RETURN).instance
    elif family == "star":
        instance = star_instance(args.n, variant or Variant.RETURN).instance
    elif family == "uniform-gap":
        values = [int(v) for v in args.values.split(",")] if args.values else list(range(1, args.n + 1))
        instance = uniform_gap_instance(values, args.eps, variant or Variant.RETURN).instance
    elif family == "zigzag":
        instance = zigzag_instance(args.n, variant or Variant.RETURN).instance
    elif family == "xc3":
        if args.subsets:
            subsets = [[int(x) for x in part.split(",")] for part in args.subsets.split(";")]
            problem = XC3Input.create(args.n, subsets)
        else:
            problem = figure2_input()
        instance = xc3_reduction(problem, variant or Variant.NO_RETURN)
    elif family == "random-tree":
        instance = random_tree(args.n, args.seed, args.weight_max, variant or Variant.NO_RETURN).instance
    else:
        instance = random_graph(args.n, args.edge_prob, args.seed, args.weight_max,
                                variant or Variant.NO_RETURN)

    text = serialize_instance(instance)
    if args.output:
        try:
            Path(args.output).write_text(text + "\n")
        except OSError as e:
            print_error(f"cannot write {args.output}: {e}")
            return EXIT_OUTPUT
    else:
        print(text)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, config: DeployConfig) -> int:
    instance = read_instance(args.input)
    try:
        oracle = ExactOracle(
            instance,
            cap=config.oracle.vertex_cap,
            verify_monotone=config.oracle.verify_monotone,
        )
    except OracleCapExceededError as e:
        print_error(str(e))
        return EXIT_CAP_EXCEEDED

    result = oracle.solve()
    report = {
        "optimum": result.optimum,
        "variant": instance.variant.value,
        "states_explored": result.states_explored,
        "infeasible_below": result.infeasible_below,
    }
    if args.witness:
        try:
            Path(args.witness).write_text(serialize_schedule(result.witness) + "\n")
        except OSError as e:
            print_error(f"cannot write {args.witness}: {e}")
            return EXIT_OUTPUT
        report["witness"] = args.witness
    print_report(report, args.json)
    return EXIT_OK


def _bench_instance(family: str, n: int, seed: int, variant: Variant) -> Instance:
    if family == "random-tree":
        return random_tree(n, seed, variant=variant).instance
    if family == "random-graph":
        return random_graph(n, min(1.0, 3.0 / max(n, 1)), seed, variant=variant)
    if family == "star":
        return star_instance(n, variant).instance
    return zigzag_instance(n, variant).instance


def _bench_one(task: tuple[str, int, int, str, bool]) -> dict[str, Any]:
    """Generate, solve and time one instance. Runs in a worker process."""
    family, n, seed, variant, emit = task
    instance = _bench_instance(family, n, seed, Variant(variant))
    emit = emit or family == "zigzag"

    started = time.perf_counter_ns()
    if instance.is_tree:
        solution = solve_tree(as_tree(instance), emit=emit)
    else:
        solution = solve_mst_approx(instance, emit=emit)
    elapsed = time.perf_counter_ns() - started

    return {
        "family": family,
        "n": n,
        "seed": seed,
        "total": solution.total,
        "solve_time_ns": elapsed,
        "schedule_len": len(solution.schedule) if solution.schedule is not None else "",
    }


def cmd_bench(args: argparse.Namespace, config: DeployConfig) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        print_error(f"--sizes must be a comma-separated list of integers, got '{args.sizes}'")
        return EXIT_INPUT

    try:
        out = open(args.output, "w", newline="") if args.output else sys.stdout
    except OSError as e:
        print_error(f"cannot write {args.output}: {e}")
        return EXIT_OUTPUT

    variant = args.variant or Variant.NO_RETURN.value
    tasks = [
        (args.family, n, args.seed + rep, variant, args.emit_schedule)
        for n in sizes
        for rep in range(config.bench.repetitions)
    ]

    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        if config.bench.workers > 1:
            with ProcessPoolExecutor(max_workers=config.bench.workers) as pool:
                rows = pool.map(_bench_one, tasks)
                for row in rows:
                    writer.writerow(row)
        else:
            for task in tasks:
                writer.writerow(_bench_one(task))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# === Argument parsing ===

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--json", action="store_true", help="Print one JSON object instead of key: value lines")

    parser = argparse.ArgumentParser(description="Strategic deployment solver")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="Minimum number of agents for an instance")
    solve.add_argument("input", help="Instance file (JSON)")
    solve.add_argument("--method", choices=["auto", "tree", "mst-approx"], default="auto")
    solve.add_argument("--emit-schedule", action="store_true", help="Emit and re-count the walk")
    solve.add_argument("--dump-decomposition", action="store_true", help="Print the collected subtrees")
    solve.add_argument("--end-leaf", help="No-return: leaf the walk must end in")
    solve.add_argument("--force", action="store_true", help="Emit schedules beyond the size limit")

    validate = sub.add_parser("validate", parents=[common], help="Count and check a schedule")
    validate.add_argument("input", help="Instance file (JSON)")
    validate.add_argument("schedule", help="Schedule file (JSON)")
    validate.add_argument("--variant", choices=[v.value for v in Variant])

    generate = sub.add_parser("generate", parents=[common], help="Write a generated instance")
    generate.add_argument("--family", choices=FAMILIES, required=True)
    generate.add_argument("--n", type=int, default=4, help="Size (leaves, m for zigzag, n for xc3)")
    generate.add_argument("--values", help="uniform-gap: comma-separated edge weights")
    generate.add_argument("--eps", type=int, default=1, help="uniform-gap: leaf demand")
    generate.add_argument("--subsets", help="xc3: subsets as '1,2,3;4,5,6'")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--edge-prob", type=float, default=0.3)
    generate.add_argument("--weight-max", type=int, default=8)
    generate.add_argument("--variant", choices=[v.value for v in Variant])
    generate.add_argument("--output", help="Write here instead of stdout")

    oracle = sub.add_parser("oracle", parents=[common], help="Exact optimum by exhaustive search")
    oracle.add_argument("input", help="Instance file (JSON)")
    oracle.add_argument("--cap", type=int, help="Refuse instances with more vertices")
    oracle.add_argument("--witness", help="Write the optimal walk to this file")

    bench = sub.add_parser("bench", parents=[common], help="Time the solvers over a size sweep")
    bench.add_argument("--family", choices=BENCH_FAMILIES, default="random-tree")
    bench.add_argument("--sizes", default="16,64,256,1024")
    bench.add_argument("--repetitions", type=int)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--workers", type=int)
    bench.add_argument("--variant", choices=[v.value for v in Variant])
    bench.add_argument("--output", help="CSV file (default stdout)")
    bench.add_argument("--emit-schedule", action="store_true")

    return parser


COMMANDS = {
    "solve": cmd_solve,
    "validate": cmd_validate,
    "generate": cmd_generate,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
}


# === Main Logic ===

def main(argv: Optional[list[str]] = None) -> int:
    """
    Entry point for the deployment CLI.

    Returns the process exit code: 0 success, 1 schedule rejected, 2 bad
    input or configuration, 3 tree method on a non-tree, 4 oracle cap
    exceeded, 5 output not writable.
    """
    args = build_parser().parse_args(argv)

    config = DeployConfig.from_env(
        vertex_cap=getattr(args, "cap", None),
        workers=getattr(args, "workers", None),
        repetitions=getattr(args, "repetitions", None),
    )
    issues = config.validate()
    for issue in issues:
        print(issue, file=sys.stderr)
    if any(issue.startswith("ERROR:") for issue in issues):
        return EXIT_INPUT

    setup_logging("DEBUG" if args.verbose else config.log_level)

    try:
        return COMMANDS[args.command](args, config)
    except OracleCapExceededError as e:
        print_error(str(e))
        return EXIT_CAP_EXCEEDED
    except (DeploymentError, ValueError, OSError) as e:
        print_error(str(e))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
