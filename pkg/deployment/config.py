"""
Deployment Toolkit Configuration

Every tunable knob of the solvers, the oracle and the benchmark harness
lives here. Defaults are chosen so that a bare `python main.py ...` behaves
sensibly; environment variables (optionally from a .env file) and CLI flags
override them.

Environment variables:
- DEPLOY_ORACLE_CAP: largest vertex count the exact oracle accepts
- DEPLOY_BENCH_WORKERS: worker processes used by `bench`
- DEPLOY_EMIT_MAX_VERTICES: largest tree for which schedules are emitted
- DEPLOY_LOG_LEVEL: logging level name (DEBUG, INFO, WARNING, ...)

Usage:
    config = DeployConfig.from_env(vertex_cap=12)
    for issue in config.validate():
        print(issue)
"""

from dataclasses import dataclass, field
import logging
import os


DEFAULT_ORACLE_CAP = 20


@dataclass
class SolverSettings:
    """
    Limits for the exact tree solvers.

    Totals are always computed; only schedule emission is bounded, because
    an optimal walk can need a quadratic number of steps.
    """
    emit_schedule_max_vertices: int = 20000


@dataclass
class OracleSettings:
    """
    Settings for the exponential reference search.

    The state space is |V| * 2^|V|, so the cap is a hard refusal
    threshold rather than a hint.
    """
    vertex_cap: int = DEFAULT_ORACLE_CAP
    verify_monotone: bool = True   # also probe optimum + 1 after bisecting


@dataclass
class BenchSettings:
    """Worker pool and repetition defaults for `bench`."""
    workers: int = 1
    repetitions: int = 1


@dataclass
class DeployConfig:
    """
    Main configuration container.

    Usage:
        config = DeployConfig()                      # defaults
        config = DeployConfig.from_env()             # environment
        config = DeployConfig.from_env(workers=4)    # environment + overrides
    """
    solver: SolverSettings = field(default_factory=SolverSettings)
    oracle: OracleSettings = field(default_factory=OracleSettings)
    bench: BenchSettings = field(default_factory=BenchSettings)
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, **overrides) -> "DeployConfig":
        """
        Create configuration from environment variables.

        Recognised overrides: vertex_cap, workers, repetitions,
        emit_schedule_max_vertices, log_level. None values are ignored so
        that unset CLI flags fall through to the environment.
        """
        data = {
            "vertex_cap": _env_int("DEPLOY_ORACLE_CAP"),
            "workers": _env_int("DEPLOY_BENCH_WORKERS"),
            "emit_schedule_max_vertices": _env_int("DEPLOY_EMIT_MAX_VERTICES"),
            "log_level": os.getenv("DEPLOY_LOG_LEVEL"),
        }
        data.update(overrides)
        data = {k: v for k, v in data.items() if v is not None}

        config = cls()
        if "vertex_cap" in data:
            config.oracle.vertex_cap = int(data["vertex_cap"])
        if "workers" in data:
            config.bench.workers = int(data["workers"])
        if "repetitions" in data:
            config.bench.repetitions = int(data["repetitions"])
        if "emit_schedule_max_vertices" in data:
            config.solver.emit_schedule_max_vertices = int(data["emit_schedule_max_vertices"])
        if "log_level" in data:
            config.log_level = str(data["log_level"]).upper()
        return config

    def validate(self) -> list[str]:
        """
        Validate configuration and return a list of warnings/errors.
        Entries starting with "ERROR:" make the CLI refuse to run.
        """
        issues = []

        if self.oracle.vertex_cap < 1:
            issues.append("ERROR: oracle vertex cap must be at least 1")
        elif self.oracle.vertex_cap > 24:
            issues.append(
                f"WARNING: oracle vertex cap {self.oracle.vertex_cap} allows "
                f"state spaces beyond 24 * 2^24"
            )

        if self.bench.workers < 1:
            issues.append("ERROR: bench workers must be at least 1")
        if self.bench.repetitions < 1:
            issues.append("ERROR: bench repetitions must be at least 1")

        if self.solver.emit_schedule_max_vertices < 1:
            issues.append("ERROR: emit_schedule_max_vertices must be at least 1")

        if not isinstance(logging.getLevelName(self.log_level), int):
            issues.append(f"ERROR: unknown log level '{self.log_level}'")

        return issues


def _env_int(name: str) -> int | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got '{raw}'") from None
