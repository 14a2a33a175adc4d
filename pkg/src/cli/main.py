"""
Command-Line Interface
estimate / oracle mc / oracle exact / hitting, one report per invocation.
"""
import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional
import logging

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

sys.path.append(str(Path(__file__).resolve().parent.parent.parent))

from config.config import (
    BACKENDS, DEFAULT_JOBS, DEFAULT_PRECISION_BITS, MC_DEFAULT_SAMPLES, MC_DEFAULT_SEED,
    MODES, STEP_UNITS, configure_logging,
)
from src.cli.report_writer import format_number, render, report_payload
from src.data.tree_loader import load_targets, load_tree
from src.evaluation.exact_solver import (
    exact_cover_return_small, exact_cover_time_small, exact_last_vertex_small,
)
from src.evaluation.monte_carlo import mc_cover_return, mc_cover_time
from src.exceptions import ConfigurationError, TreeCoverError
from src.extensions.cover_time import cover_time
from src.extensions.hitting import hitting_time_exact
from src.extensions.subset import cover_return_subset
from src.extensions.weighted import cover_return_weighted
from src.inference.arithmetic import make_backend
from src.inference.estimator import cover_return_time

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3


class RunConfig(BaseModel):
    """Validated settings of one CLI invocation."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    command: Literal["estimate", "oracle-mc", "oracle-exact", "hitting"]
    input: Path
    start: Optional[str] = None
    epsilon: Optional[Fraction] = None
    trunc_n: Optional[int] = None
    mode: Literal["cover-return", "cover", "subset", "weighted"] = "cover-return"
    targets: Optional[Path] = None
    units: Literal["chain", "subdivided"] = "chain"
    backend: Literal["auto", "rational", "float", "numpy"] = "auto"
    precision: int = DEFAULT_PRECISION_BITS
    samples: int = MC_DEFAULT_SAMPLES
    seed: int = MC_DEFAULT_SEED
    measure: str = "cover-return"
    source: Optional[str] = None
    target: Optional[str] = None
    output: Literal["json", "text"] = "json"
    jobs: int = DEFAULT_JOBS
    omit_timing: bool = False

    @field_validator("epsilon", mode="before")
    @classmethod
    def parse_epsilon(cls, value):
        if value is None or isinstance(value, Fraction):
            return value
        try:
            epsilon = Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"epsilon must be a positive decimal or p/q, got {value!r}") from None
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        return epsilon

    @field_validator("trunc_n", "samples", "precision", "jobs")
    @classmethod
    def positive(cls, value):
        if value is not None and value < 1:
            raise ValueError("must be a positive integer")
        return value

    @model_validator(mode="after")
    def check_combination(self):
        if self.command == "estimate":
            if (self.epsilon is None) == (self.trunc_n is None):
                raise ValueError("estimate needs exactly one of --epsilon and --trunc-n")
            if self.mode == "subset" and self.targets is None:
                raise ValueError("subset mode needs --targets")
        if self.command in ("estimate", "oracle-mc", "oracle-exact") and self.start is None:
            raise ValueError(f"{self.command} needs --start")
        if self.command == "hitting" and (self.source is None or self.target is None):
            raise ValueError("hitting needs --from and --to")
        return self


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so run_cli owns exit codes."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigurationError(f"{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="treecover", description="Cover-time estimation for random walks on trees.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sub):
        sub.add_argument("--input", required=True, help="tree file (u v [R] per line)")
        sub.add_argument("--output", choices=("json", "text"), default="json")
        sub.add_argument("--log-level", default=None)

    estimate = commands.add_parser("estimate", help="certified estimate")
    common(estimate)
    estimate.add_argument("--start", required=True)
    estimate.add_argument("--epsilon")
    estimate.add_argument("--trunc-n", type=int)
    estimate.add_argument("--mode", choices=MODES, default="cover-return")
    estimate.add_argument("--targets", help="file with one target label per line")
    estimate.add_argument("--units", choices=STEP_UNITS, default="chain")
    estimate.add_argument("--backend", choices=BACKENDS, default="auto")
    estimate.add_argument("--precision", type=int, default=DEFAULT_PRECISION_BITS)
    estimate.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    estimate.add_argument("--omit-timing", action="store_true", help="emit wallclock_ms as null")

    oracle = commands.add_parser("oracle", help="reference values")
    oracles = oracle.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    mc = oracles.add_parser("mc", help="Monte-Carlo simulation")
    common(mc)
    mc.add_argument("--start", required=True)
    mc.add_argument("--samples", type=int, default=MC_DEFAULT_SAMPLES)
    mc.add_argument("--seed", type=int, default=MC_DEFAULT_SEED)
    mc.add_argument("--measure", choices=("cover-return", "cover"), default="cover-return")
    mc.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    exact = oracles.add_parser("exact", help="exact solver for small trees")
    common(exact)
    exact.add_argument("--start", required=True)
    exact.add_argument("--measure", choices=("cover-return", "cover", "last-vertex"),
                       default="cover-return")

    hitting = commands.add_parser("hitting", help="exact hitting time")
    common(hitting)
    hitting.add_argument("--from", dest="source", required=True)
    hitting.add_argument("--to", dest="target", required=True)
    return parser


def config_from_args(args):
    """Build a RunConfig from parsed arguments."""
    command = args.command if args.command != "oracle" else f"oracle-{args.oracle}"
    fields = {key: value for key, value in vars(args).items()
              if key not in ("command", "oracle", "log_level") and value is not None}
    return RunConfig(command=command, **fields)


def run_estimate(config):
    tree = load_tree(config.input)
    options = dict(trunc_n=config.trunc_n, backend=config.backend,
                   precision_bits=config.precision, n_jobs=config.jobs)
    if config.mode == "cover-return":
        report = cover_return_time(tree, config.start, config.epsilon, **options)
    elif config.mode == "cover":
        report = cover_time(tree, config.start, config.epsilon, **options)
    elif config.mode == "subset":
        targets = load_targets(config.targets)
        report = cover_return_subset(tree, config.start, targets, config.epsilon, **options)
    else:
        report = cover_return_weighted(tree, config.start, config.epsilon, units=config.units,
                                       **options)
    backend = make_backend(report.backend, bits=config.precision)
    return report_payload(report, backend, omit_timing=config.omit_timing)


def run_oracle_mc(config):
    tree = load_tree(config.input)
    simulate = mc_cover_return if config.measure == "cover-return" else mc_cover_time
    result = simulate(tree, config.start, config.samples, config.seed, n_jobs=config.jobs)
    return {
        "oracle": "mc",
        "measure": result.measure,
        "n": tree.n,
        "start": config.start,
        "samples": result.samples,
        "mean": result.mean,
        "std": result.std,
        "half_width": result.half_width,
        "seed": result.seed,
    }


def run_oracle_exact(config):
    tree = load_tree(config.input)
    payload = {"oracle": "exact", "measure": config.measure, "n": tree.n, "start": config.start}
    if config.measure == "last-vertex":
        distribution = exact_last_vertex_small(tree, config.start)
        payload["probabilities"] = {label: format_number(p) for label, p in distribution.items()}
        return payload
    solve = exact_cover_return_small if config.measure == "cover-return" else exact_cover_time_small
    result = solve(tree, config.start)
    payload["value"] = format_number(result.value)
    payload["fraction"] = str(result.value)
    payload["states"] = result.states
    payload["exact"] = True
    return payload


def run_hitting(config):
    tree = load_tree(config.input)
    value = hitting_time_exact(tree, config.source, config.target)
    return {"from": config.source, "to": config.target, "value": format_number(value),
            "fraction": str(value), "exact": True}


COMMANDS = {
    "estimate": run_estimate,
    "oracle-mc": run_oracle_mc,
    "oracle-exact": run_oracle_exact,
    "hitting": run_hitting,
}


def run_cli(argv=None, stdout=None):
    """
    Parse argv, run one command and write its report.

    Returns:
        Exit code: 0 success, 2 input error, 3 resource cap exceeded
    """
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.log_level)
        config = config_from_args(args)
        payload = COMMANDS[config.command](config)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ValidationError as exc:
        print(f"treecover: invalid arguments: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TreeCoverError as exc:
        print(f"treecover: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"treecover: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stdout.write(render(payload, config.output) + "\n")
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
