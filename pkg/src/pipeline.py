#!/usr/bin/env python3
"""
Pipeline orchestration for Butterfly Router.

Each command runs as a short sequence of numbered steps:
load inputs, build the butterfly, route / compile / verify, write artifacts.
Every pipeline returns an exit status: 0 on success, 1 on a verification
failure, 2 on an input error.
"""

import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

# Add project root to Python path
PROJECT_ROOT = Path(__file__).parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import numpy as np
from rich.console import Console
from rich.table import Table

from src.compiler.circuit import Circuit
from src.compiler.compiler import compile_circuit
from src.compiler.program import CompiledProgram
from src.compiler.verify import verify_program
from src.routing.router import depth_bound, random_permutation, route_many, route_permutation
from src.routing.schedule import Permutation, Schedule, VerificationReport, verify_schedule
from src.topology.butterfly import (
    build_butterfly,
    degree_histogram,
    is_row_cyclic_invariant,
    minimal_dimension,
    quotient_is_hypercube,
)
from src.topology.export import to_dot, to_json_adjacency
from src.topology.variants import build_kary_butterfly, overhead_estimates, ring_expand
from src.utils.common_functions import DOCUMENT_ERRORS, dumps_json, read_structured, write_file_text, write_json
from src.utils.exceptions import (
    ButterflyError,
    CompilationError,
    PermutationError,
    RoutingError,
    ScheduleError,
    TopologyError,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2

FlowFunction = Optional[Callable[..., Any]]


def _log_exception_cause(e: Exception) -> None:
    """
    Log the cause of an exception if available and not already included in the exception message.
    Checks both e.cause (if set via constructor) and e.__cause__ (if set via 'from e').
    """
    cause = getattr(e, 'cause', None) or getattr(e, '__cause__', None)
    if cause:
        cause_str = str(cause)
        error_str = str(e)
        if cause_str not in error_str:
            logger.error("   Cause: %s", cause)


def _log_report(report: VerificationReport, limit: int = 20) -> None:
    for failure in report.failures[:limit]:
        logger.error("   %s", failure)
    if len(report.failures) > limit:
        logger.error("   ... and %d more", len(report.failures) - limit)


def load_permutation(path: str) -> Permutation:
    """
    Read a permutation file: a JSON array, or an object with an "image" array.

    Raises:
        PermutationError: If the file is malformed or not a bijection.
    """
    try:
        data = read_structured(path)
    except DOCUMENT_ERRORS as e:
        raise PermutationError(f"Cannot read permutation file {path}: {e}", cause=e) from e
    image = data.get("image") if isinstance(data, dict) else data
    if not isinstance(image, list):
        raise PermutationError(f"Permutation file {path} must hold a JSON array")
    return Permutation(tuple(image))


def _load_document(path: str, what: str) -> Dict[str, Any]:
    try:
        data = read_structured(path)
    except DOCUMENT_ERRORS as e:
        raise ScheduleError(f"Cannot read {what} file {path}: {e}", cause=e) from e
    if not isinstance(data, dict):
        raise ScheduleError(f"{what.capitalize()} file {path} must hold a JSON object")
    return data


def topology_pipeline(r: int, variant: str = "butterfly", k: Optional[int] = None, fmt: str = "dot",
                      out: Optional[str] = None, stats: bool = False) -> int:
    """
    Export the butterfly (or a variant) as DOT or JSON adjacency.

    Returns:
        int: Exit status.
    """
    try:
        logger.info("[1/2] Building %s graph (r=%d)", variant, r)
        g = build_butterfly(r)
        graph = g
        if variant == "kary":
            graph = build_kary_butterfly(r, k or 2)
        elif variant == "ring":
            graph = ring_expand(g)
    except TopologyError as e:
        logger.error("❌ Invalid topology: %s", e)
        _log_exception_cause(e)
        return EXIT_INPUT_ERROR

    text = to_dot(graph) if fmt == "dot" else dumps_json(to_json_adjacency(graph))
    logger.info("[2/2] Writing %s", fmt.upper())
    if out:
        try:
            write_file_text(out, text)
        except OSError as e:
            logger.error("❌ Cannot write %s: %s", out, e)
            return EXIT_INPUT_ERROR
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)

    if stats:
        histogram = degree_histogram(graph.graph)
        logger.info("nodes: %d  edges: %d  degrees: %s", graph.graph.number_of_nodes(),
                    graph.graph.number_of_edges(), histogram)
        if variant == "butterfly":
            logger.info("row quotient is the hypercube: %s", quotient_is_hypercube(g))
            logger.info("column rotation is an automorphism: %s", is_row_cyclic_invariant(g))
        for estimate in overhead_estimates(r, k or 3).values():
            logger.info("%-24s degree %d  time overhead %.2f", estimate.name, estimate.degree, estimate.time_overhead)
    return EXIT_OK


def route_pipeline(r: int, perm_path: str, out: str, explain: bool = False, validate: bool = True,
                   flow_func: FlowFunction = None) -> int:
    """
    Route a permutation file and write the schedule.

    Returns:
        int: Exit status.
    """
    try:
        logger.info("[1/3] Loading permutation")
        g = build_butterfly(r)
        pi = load_permutation(perm_path)
        if len(pi) != g.n:
            raise PermutationError(f"Permutation has {len(pi)} points, butterfly r={r} has {g.n} nodes")
    except (TopologyError, PermutationError) as e:
        logger.error("❌ Invalid input: %s", e)
        _log_exception_cause(e)
        return EXIT_INPUT_ERROR

    try:
        logger.info("[2/3] Routing on r=%d (n=%d)", r, g.n)
        start = time.perf_counter()
        result = route_permutation(g, pi, validate=validate, flow_func=flow_func)
        elapsed = time.perf_counter() - start
    except RoutingError as e:
        logger.error("❌ Routing failed: %s", e)
        _log_exception_cause(e)
        return EXIT_VERIFICATION_FAILED
    except ButterflyError as e:
        logger.error("❌ Internal error while routing: %s", e)
        _log_exception_cause(e)
        return EXIT_VERIFICATION_FAILED

    logger.info("[3/3] Writing schedule")
    try:
        write_json(out, result.schedule.to_dict())
        if explain:
            explain_path = f"{out}.explain.json"
            write_json(explain_path, result.explain())
            logger.info("Wrote %s", explain_path)
    except OSError as e:
        logger.error("❌ Cannot write the schedule: %s", e)
        return EXIT_INPUT_ERROR

    worst, ceiling = depth_bound(r)
    d1, d2, d3 = result.phase_depths
    logger.info("phase depths: %d + %d + %d", d1, d2, d3)
    logger.info("depth: %d (pre-elision %d, bound 6r-6 = %d, 6 log2 n <= %d)",
                result.depth_post_elision, result.depth_pre_elision, worst, ceiling)
    logger.info("elapsed: %.3f s", elapsed)
    logger.info("Wrote %s", out)
    return EXIT_OK


def verify_pipeline(r: int, schedule_path: str, perm_path: str) -> int:
    """
    Verify a schedule file against a permutation file.

    Returns:
        int: Exit status.
    """
    try:
        logger.info("[1/2] Loading schedule and permutation")
        g = build_butterfly(r)
        schedule = Schedule.from_dict(_load_document(schedule_path, "schedule"))
        pi = load_permutation(perm_path)
    except (TopologyError, PermutationError, ScheduleError) as e:
        logger.error("❌ Invalid input: %s", e)
        _log_exception_cause(e)
        return EXIT_INPUT_ERROR

    logger.info("[2/2] Verifying %d layers", len(schedule.layers))
    report = verify_schedule(g, schedule, pi)
    logger.info("depth: %d  max occupancy: %d", report.depth, report.max_occupancy)
    if not report.passed:
        logger.error("❌ Verification failed (%s)", ", ".join(report.checks_failed()))
        _log_report(report)
        return EXIT_VERIFICATION_FAILED
    logger.info("✅ Schedule verified")
    return EXIT_OK


def _load_circuit(path: str) -> Circuit:
    try:
        data = read_structured(path)
    except DOCUMENT_ERRORS as e:
        raise CompilationError(f"Cannot read circuit file {path}: {e}", cause=e) from e
    if not isinstance(data, dict):
        raise CompilationError(f"Circuit file {path} must hold a JSON object")
    return Circuit.from_dict(data)


def compile_pipeline(r: int, circuit_path: str, out: str, stats: bool = False, validate: bool = True,
                     flow_func: FlowFunction = None) -> int:
    """
    Compile a circuit file and write the program.

    Returns:
        int: Exit status.
    """
    try:
        logger.info("[1/3] Loading circuit")
        g = build_butterfly(r)
        circuit = _load_circuit(circuit_path)
        circuit.validate(g.n)
    except (TopologyError, CompilationError) as e:
        logger.error("❌ Invalid input: %s", e)
        _log_exception_cause(e)
        return EXIT_INPUT_ERROR

    try:
        logger.info("[2/3] Compiling %d timesteps on r=%d (n=%d)", len(circuit.timesteps), r, g.n)
        start = time.perf_counter()
        program = compile_circuit(g, circuit, validate=validate, flow_func=flow_func)
        elapsed = time.perf_counter() - start
    except (CompilationError, RoutingError) as e:
        logger.error("❌ Compilation failed: %s", e)
        _log_exception_cause(e)
        return EXIT_VERIFICATION_FAILED

    logger.info("[3/3] Writing program")
    try:
        write_json(out, program.to_dict())
    except OSError as e:
        logger.error("❌ Cannot write %s: %s", out, e)
        return EXIT_INPUT_ERROR

    worst, ceiling = depth_bound(r)
    if stats:
        for info in program.rounds:
            logger.info("timestep %d round %d: routing depth %d, %d gate(s)",
                        info.timestep, info.round, info.routing_depth, info.gates)
    logger.info("rounds: %d  depth: %d  routing depth: %d  max per round: %d (bound %d, 6 log2 n <= %d)",
                len(program.rounds), program.depth, program.routing_depth, program.max_round_depth(),
                worst, ceiling)
    logger.info("elapsed: %.3f s", elapsed)
    logger.info("Wrote %s", out)
    return EXIT_OK


def verify_program_pipeline(r: int, circuit_path: str, program_path: str) -> int:
    """
    Verify a compiled program against its circuit.

    Returns:
        int: Exit status.
    """
    try:
        logger.info("[1/2] Loading circuit and program")
        g = build_butterfly(r)
        circuit = _load_circuit(circuit_path)
        program = CompiledProgram.from_dict(_load_document(program_path, "program"))
    except (TopologyError, CompilationError, ScheduleError) as e:
        logger.error("❌ Invalid input: %s", e)
        _log_exception_cause(e)
        return EXIT_INPUT_ERROR

    logger.info("[2/2] Verifying %d layers", len(program.layers))
    report = verify_program(g, circuit, program)
    logger.info("depth: %d  max occupancy: %d", report.depth, report.max_occupancy)
    if not report.passed:
        logger.error("❌ Verification failed (%s)", ", ".join(report.checks_failed()))
        _log_report(report)
        return EXIT_VERIFICATION_FAILED
    logger.info("✅ Program verified")
    return EXIT_OK


def bench_pipeline(r_values: Sequence[int], count: int, seed: int = 0, workers: int = 1,
                   validate: bool = True, flow_func: FlowFunction = None) -> int:
    """
    Route `count` random permutations per r and print a depth table.

    Instances for dimension r are drawn from numpy's default_rng((seed, r)).
    Fails when any instance exceeds 6r - 6 or, with validation, fails to verify.

    Returns:
        int: Exit status.
    """
    table = Table(title=f"Random permutation routing ({count} per r, seed {seed})")
    for column in ("r", "n", "mean depth", "max depth", "6r-6", "ceil 6 log2 n", "wall time (s)"):
        table.add_column(column, justify="right")

    status = EXIT_OK
    for step, r in enumerate(r_values, start=1):
        logger.info("[%d/%d] Routing %d permutations at r=%d", step, len(r_values), count, r)
        try:
            g = build_butterfly(r)
        except TopologyError as e:
            logger.error("❌ Invalid dimension: %s", e)
            return EXIT_INPUT_ERROR

        rng = np.random.default_rng((seed, r))
        perms = [random_permutation(g.n, rng) for _ in range(count)]
        start = time.perf_counter()
        try:
            results = route_many(g, perms, workers=workers, validate=validate, flow_func=flow_func)
        except ButterflyError as e:
            logger.error("❌ Routing failed at r=%d: %s", r, e)
            _log_exception_cause(e)
            return EXIT_VERIFICATION_FAILED
        elapsed = time.perf_counter() - start

        worst, ceiling = depth_bound(r)
        depths: List[int] = [result.depth_post_elision for result in results]
        over = [d for d in depths if d > worst]
        if over or any(result.depth_pre_elision != worst for result in results):
            logger.error("❌ r=%d: %d instance(s) exceed the 6r-6 bound", r, len(over))
            status = EXIT_VERIFICATION_FAILED
        table.add_row(str(r), str(g.n), f"{np.mean(depths):.2f}", str(max(depths)), str(worst),
                      str(ceiling), f"{elapsed:.3f}")

    Console().print(table)
    return status


def min_r_pipeline(qubits: int) -> int:
    """Report the smallest butterfly holding `qubits` logical qubits."""
    try:
        r = minimal_dimension(qubits)
    except TopologyError as e:
        logger.error("❌ %s", e)
        return EXIT_INPUT_ERROR
    logger.info("minimal r for %d qubits: %d (n = %d)", qubits, r, r * (1 << r))
    return EXIT_OK
