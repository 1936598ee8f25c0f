#!/usr/bin/env python3
"""
Command-line front end for Butterfly Router.

Usage:
    python src/cli.py topology --r 3 [--format dot|json] [--kary K | --ring-expand] [--stats] [--out FILE]
    python src/cli.py route --r 3 --perm perm.json --out schedule.json [--explain] [--no-validate]
    python src/cli.py compile --r 3 --circuit circuit.json --out program.json [--stats] [--no-validate]
    python src/cli.py verify --graph 3 --schedule schedule.json --perm perm.json
    python src/cli.py verify-program --r 3 --circuit circuit.json --program program.json
    python src/cli.py bench --r 3..8 [--count 100] [--seed 0] [--workers 4] [--no-validate]
    python src/cli.py min-r --qubits 100

Exit status: 0 success, 1 verification failure, 2 input error.
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

# Add project root to Python path
PROJECT_ROOT = Path(__file__).parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src import pipeline
from src.utils.config import get_flow_function, load_routing_config
from src.utils.config_validator import INPUT_ERROR_EXIT_CODE, format_validation_errors, validate_run_config
from src.utils.exceptions import ConfigError
from src.utils.logger import get_logger

logger = get_logger(__name__)

COMMANDS = ("topology", "route", "compile", "verify", "verify-program", "bench", "min-r")


@dataclass
class RunConfig:
    """
    One command invocation.

    Attributes:
        command (str): One of COMMANDS.
        r (Optional[int]): Butterfly dimension for single-graph commands.
        r_values (List[int]): Dimensions swept by bench.
        perm, schedule, circuit, program (Optional[str]): Input files.
        out (Optional[str]): Output file.
        explain (bool): Also write <out>.explain.json (route).
        validate (bool): Self-verify artifacts before reporting success.
        seed (int): Seed for random bench instances.
        count (int): Instances per dimension (bench).
        workers (int): Concurrent routing jobs (bench).
        format (str): "dot" or "json" (topology).
        variant (str): "butterfly", "kary" or "ring" (topology).
        k (Optional[int]): Arity for the k-ary variant.
        stats (bool): Print extra statistics.
        qubits (Optional[int]): Logical qubit count (min-r).
        flow_algorithm (str): networkx max-flow algorithm for edge coloring.
    """
    command: str
    r: Optional[int] = None
    r_values: Sequence[int] = ()
    perm: Optional[str] = None
    schedule: Optional[str] = None
    circuit: Optional[str] = None
    program: Optional[str] = None
    out: Optional[str] = None
    explain: bool = False
    validate: bool = True
    seed: int = 0
    count: int = 100
    workers: int = 1
    format: str = "dot"
    variant: str = "butterfly"
    k: Optional[int] = None
    stats: bool = False
    qubits: Optional[int] = None
    flow_algorithm: str = "edmonds_karp"

    def dimensions(self) -> List[int]:
        """Every r this run touches."""
        values = list(self.r_values)
        if self.r is not None:
            values.append(self.r)
        return values


def parse_r_range(text: str) -> List[int]:
    """
    Parse "5", "3..8" or "3,5,7" into a list of dimensions.

    Raises:
        argparse.ArgumentTypeError: On malformed input.
    """
    try:
        if ".." in text:
            low, high = text.split("..", 1)
            return list(range(int(low), int(high) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected R, R..R or R,R,..., got {text!r}") from None


def run(config: RunConfig) -> int:
    """
    Execute one command.

    Args:
        config (RunConfig): The invocation.

    Returns:
        int: Exit status (0 success, 1 verification failure, 2 input error).
    """
    is_valid, errors = validate_run_config(config)
    if not is_valid:
        logger.error(format_validation_errors(errors))
        return INPUT_ERROR_EXIT_CODE

    try:
        flow_func = get_flow_function(config.flow_algorithm)
        output_dir = Path(load_routing_config()["output_dir"])
    except ConfigError as e:
        logger.error("❌ Invalid configuration: %s", e)
        return INPUT_ERROR_EXIT_CODE

    if config.command == "topology":
        return pipeline.topology_pipeline(config.r, variant=config.variant, k=config.k, fmt=config.format,
                                          out=config.out, stats=config.stats)
    if config.command == "route":
        out = config.out or str(output_dir / "schedule.json")
        return pipeline.route_pipeline(config.r, config.perm, out, explain=config.explain,
                                       validate=config.validate, flow_func=flow_func)
    if config.command == "compile":
        out = config.out or str(output_dir / "program.json")
        return pipeline.compile_pipeline(config.r, config.circuit, out, stats=config.stats,
                                         validate=config.validate, flow_func=flow_func)
    if config.command == "verify":
        return pipeline.verify_pipeline(config.r, config.schedule, config.perm)
    if config.command == "verify-program":
        return pipeline.verify_program_pipeline(config.r, config.circuit, config.program)
    if config.command == "bench":
        return pipeline.bench_pipeline(config.r_values, config.count, seed=config.seed, workers=config.workers,
                                       validate=config.validate, flow_func=flow_func)
    if config.command == "min-r":
        return pipeline.min_r_pipeline(config.qubits)

    logger.error("❌ Unknown command: %s", config.command)
    return INPUT_ERROR_EXIT_CODE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="butterfly-router",
        description="Route permutations and compile circuits on the cyclic butterfly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    topology = sub.add_parser("topology", help="Export the graph as DOT or JSON")
    topology.add_argument("--r", type=int, required=True)
    topology.add_argument("--format", choices=["dot", "json"], default="dot")
    topology.add_argument("--variant", choices=["butterfly", "kary", "ring"], default="butterfly")
    topology.add_argument("--k", type=int, default=None, help="Arity of the k-ary variant")
    topology.add_argument("--kary", type=int, default=None, metavar="K", help="Shorthand for --variant kary --k K")
    topology.add_argument("--ring-expand", action="store_true", help="Shorthand for --variant ring")
    topology.add_argument("--stats", action="store_true", help="Print degree and overhead figures")
    topology.add_argument("--out", default=None, help="Output file (standard output if omitted)")

    route = sub.add_parser("route", help="Route a permutation")
    route.add_argument("--r", type=int, required=True)
    route.add_argument("--perm", required=True, help="JSON array image of length n")
    route.add_argument("--out", default=None, help="Schedule JSON output")
    route.add_argument("--explain", action="store_true", help="Also write <out>.explain.json")
    route.add_argument("--no-validate", dest="validate", action="store_false", default=None)

    compile_ = sub.add_parser("compile", help="Compile a circuit")
    compile_.add_argument("--r", type=int, required=True)
    compile_.add_argument("--circuit", required=True)
    compile_.add_argument("--out", default=None, help="Program JSON output")
    compile_.add_argument("--stats", action="store_true", help="Print per-round routing depths")
    compile_.add_argument("--no-validate", dest="validate", action="store_false", default=None)

    verify = sub.add_parser("verify", help="Verify a schedule against a permutation")
    verify.add_argument("--graph", dest="r", type=int, required=True, help="Butterfly dimension r")
    verify.add_argument("--schedule", required=True)
    verify.add_argument("--perm", required=True)

    verify_program = sub.add_parser("verify-program", help="Verify a compiled program against its circuit")
    verify_program.add_argument("--r", type=int, required=True)
    verify_program.add_argument("--circuit", required=True)
    verify_program.add_argument("--program", required=True)

    bench = sub.add_parser("bench", help="Route random permutations and tabulate depths")
    bench.add_argument("--r", dest="r_values", type=parse_r_range, required=True, help="R, R..R or R,R,...")
    bench.add_argument("--count", type=int, default=100)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--workers", type=int, default=None)
    bench.add_argument("--no-validate", dest="validate", action="store_false", default=None)

    min_r = sub.add_parser("min-r", help="Smallest r with r * 2^r >= qubits")
    min_r.add_argument("--qubits", type=int, required=True)

    for command in sub.choices.values():
        command.add_argument("--flow-algorithm", default=None, help="networkx max-flow algorithm")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge parsed arguments over the environment defaults."""
    defaults = load_routing_config()
    kary = getattr(args, "kary", None)
    variant = getattr(args, "variant", None)
    if kary is not None:
        variant = "kary"
    elif getattr(args, "ring_expand", False):
        variant = "ring"

    def pick(name: str, fallback):
        value = getattr(args, name, None)
        return fallback if value is None else value

    return RunConfig(
        command=args.command,
        r=getattr(args, "r", None),
        r_values=getattr(args, "r_values", None) or (),
        perm=getattr(args, "perm", None),
        schedule=getattr(args, "schedule", None),
        circuit=getattr(args, "circuit", None),
        program=getattr(args, "program", None),
        out=getattr(args, "out", None),
        explain=getattr(args, "explain", False),
        validate=pick("validate", defaults["validate"]),
        seed=pick("seed", defaults["seed"]),
        count=pick("count", 100),
        workers=pick("workers", defaults["workers"]),
        format=pick("format", "dot"),
        variant=variant or "butterfly",
        k=kary if kary is not None else getattr(args, "k", None),
        stats=getattr(args, "stats", False),
        qubits=getattr(args, "qubits", None),
        flow_algorithm=pick("flow_algorithm", defaults["flow_algorithm"]),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    CLI entry point.

    Args:
        argv: Arguments without the program name; sys.argv[1:] if None.

    Returns:
        int: Exit status.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR_EXIT_CODE if e.code else 0
    try:
        config = config_from_args(args)
    except ValueError as e:
        logger.error("❌ Invalid configuration: %s", e)
        return INPUT_ERROR_EXIT_CODE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
