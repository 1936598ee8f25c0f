#!/usr/bin/env python3
"""
Permutation routing on the cyclic butterfly in three phases.

1. Row sort: inside every row, move each qubit to the column given by its
   color, so that every column holds each destination row exactly once.
2. Column routing: pipelined Benes traversal taking every qubit to its
   destination row without leaving its column.
3. Row sort: inside every row, move each qubit to its destination column.

Worst-case depth is (2r - 3) + 2r + (2r - 3) = 6r - 6 < 6 log2(n).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.routing.benes import BenesPlan, plan_columns, shift_layers
from src.routing.edge_coloring import (
    EdgeColoring,
    RoutingGraph,
    build_routing_graph,
    color_edges,
)
from src.routing.schedule import (
    Layer,
    Permutation,
    Phase,
    Placement,
    Schedule,
    SwapLayer,
    apply_layer,
    identity_placement,
    verify_schedule,
)
from src.routing.sorting_networks import replay_swaps, sort_on_path_schedule
from src.topology.butterfly import MIN_DIMENSION, ButterflyGraph
from src.utils.exceptions import RoutingError, ScheduleError, TopologyError
from src.utils.logger import get_logger

logger = get_logger(__name__)

FlowFunction = Optional[Callable[..., Any]]


@dataclass
class RoutingResult:
    """
    Attributes:
        schedule (Schedule): Executable layers, empty stages elided.
        depth_pre_elision (int): Depth with every stage counted, 6r - 6.
        phase_depths (Tuple[int, int, int]): Post-elision depth of each phase.
        phase_depths_pre_elision (Tuple[int, int, int]): (2r - 3, 2r, 2r - 3).
        routing_graph (RoutingGraph): Source row -> destination row multigraph.
        coloring (EdgeColoring): Column assignment of the first row sort.
        column_plans (List[BenesPlan]): Per-column plans, empty when phase 2 is elided.
        phase_swaps (Dict[int, List[List[Tuple[int, int]]]]): Executed swaps per
            stage of phases 1 and 3 (including idle stages).
    """
    schedule: Schedule
    depth_pre_elision: int
    phase_depths: Tuple[int, int, int]
    phase_depths_pre_elision: Tuple[int, int, int]
    routing_graph: RoutingGraph
    coloring: EdgeColoring
    column_plans: List[BenesPlan] = field(default_factory=list)
    phase_swaps: Dict[int, List[List[Tuple[int, int]]]] = field(default_factory=dict)

    @property
    def depth_post_elision(self) -> int:
        return self.schedule.depth

    def explain(self) -> Dict[str, Any]:
        """JSON-ready dump of every intermediate artifact."""
        return {
            "r": self.schedule.r,
            "depth_pre_elision": self.depth_pre_elision,
            "depth_post_elision": self.depth_post_elision,
            "phase_depths": list(self.phase_depths),
            "phase_depths_pre_elision": list(self.phase_depths_pre_elision),
            "routing_graph": self.routing_graph.to_dict(),
            "colors": list(self.coloring.colors),
            "phase_swaps": {
                str(phase): [[list(pair) for pair in stage] for stage in stages]
                for phase, stages in self.phase_swaps.items()
            },
            "benes": {
                str(column): {"bit_order": list(plan.bit_order), "bits": plan.bit_matrix()}
                for column, plan in enumerate(self.column_plans)
            },
        }


def depth_bound(r: int) -> Tuple[int, int]:
    """
    Worst-case depth and the logarithmic bound it stays under.

    Args:
        r (int): Butterfly dimension, at least 3.

    Returns:
        Tuple[int, int]: (6r - 6, ceil(6 * log2(r * 2^r))).

    Raises:
        TopologyError: If r < 3.
    """
    if r < MIN_DIMENSION:
        raise TopologyError(f"Butterfly dimension must be >= {MIN_DIMENSION}, got {r}")
    return 6 * r - 6, math.ceil(6 * math.log2(r * (1 << r)))


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation.random(n, rng)


def _row_sort(placement: Placement, r: int, rows: int, key: Callable[[int], int],
              phase: Phase) -> Tuple[List[SwapLayer], List[List[Tuple[int, int]]], Placement]:
    """Sort every row by `key(token)` with the insertion network; stage s of all rows runs as one layer."""
    stages: List[List[Tuple[int, int]]] = [[] for _ in range(max(2 * r - 3, 0))]
    result = list(placement)
    for row in range(rows):
        base = row * r
        tokens = placement[base: base + r]
        executed = sort_on_path_schedule([key(token) for token in tokens])
        for s, stage in enumerate(executed):
            stages[s].extend((base + a, base + b) for a, b in stage)
        result[base: base + r] = replay_swaps(tokens, executed)
    layers = [SwapLayer(pairs=tuple(stage), phase=phase) for stage in stages]
    return layers, stages, result


def _simulate(g: ButterflyGraph, placement: Placement, layers: Sequence[Layer],
              expected: Placement, phase: Phase) -> None:
    """Re-run a phase through apply_layer and compare with the tracked placement."""
    current = list(placement)
    try:
        for layer in layers:
            current = apply_layer(current, layer, g)
    except ScheduleError as e:
        raise RoutingError(f"Phase {int(phase)} emitted an invalid layer: {e}", cause=e) from e
    if current != expected:
        raise RoutingError(f"Phase {int(phase)} simulation disagrees with its tracked placement")


def route_permutation(g: ButterflyGraph, pi: Permutation, validate: bool = True,
                      flow_func: FlowFunction = None) -> RoutingResult:
    """
    Route pi on g: the token at node a ends at node pi(a).

    Args:
        g (ButterflyGraph): The butterfly.
        pi (Permutation): Target permutation of the n nodes.
        validate (bool): Check every phase certificate and verify the final
            schedule; raise on any failure.
        flow_func: networkx max-flow function used by the edge coloring.

    Returns:
        RoutingResult: The schedule and its depth accounting.

    Raises:
        RoutingError: On a size mismatch or, with validate, a failed certificate.
    """
    r, rows = g.r, g.rows
    if len(pi) != g.n:
        raise RoutingError(f"Permutation has {len(pi)} points, butterfly r={r} has {g.n} nodes")

    routing_graph = build_routing_graph(pi, r)
    coloring = color_edges(routing_graph, flow_func=flow_func)

    def dest_row(token: int) -> int:
        return pi(token) // r

    # Phase 1
    start = identity_placement(g.n)
    phase1, swaps1, after1 = _row_sort(start, r, rows, coloring.color_of, Phase.ROW_SORT)
    if validate:
        _simulate(g, start, phase1, after1, Phase.ROW_SORT)
        for column in range(r):
            labels = sorted(dest_row(after1[row * r + column]) for row in range(rows))
            if labels != list(range(rows)):
                raise RoutingError(f"After row sort, column {column} does not hold every destination row once")

    # Phase 2
    cols = [[dest_row(after1[w * r + c]) for w in range(rows)] for c in range(r)]
    plans: List[BenesPlan] = []
    phase2: List[Layer] = []
    after2 = list(after1)
    if any(cols[c][w] != w for c in range(r) for w in range(rows)):
        plans = plan_columns(g, cols)
        phase2 = list(shift_layers(g, plans))
        for c in range(r):
            for w in range(rows):
                after2[cols[c][w] * r + c] = after1[w * r + c]
    else:
        logger.debug("Column routing elided: every column already in row order",
                     extra={"r": r, "phase": int(Phase.COLUMN_ROUTE)})
    if validate:
        _simulate(g, after1, phase2, after2, Phase.COLUMN_ROUTE)
        stray = [a for a in range(g.n) if after2[a] is not None and dest_row(after2[a]) != a // r]
        if stray:
            raise RoutingError(f"After column routing, {len(stray)} token(s) are outside their destination row")

    # Phase 3
    phase3, swaps3, after3 = _row_sort(after2, r, rows, lambda token: pi(token) % r, Phase.ROW_FINISH)
    if validate:
        _simulate(g, after2, phase3, after3, Phase.ROW_FINISH)
        if any(after3[pi(a)] != a for a in range(g.n)):
            raise RoutingError("After the final row sort, the placement differs from the target")

    layers = [layer for layer in [*phase1, *phase2, *phase3] if not layer.is_empty()]
    schedule = Schedule(r=r, layers=layers)
    phase_depths = (
        schedule.phase_depth(Phase.ROW_SORT),
        schedule.phase_depth(Phase.COLUMN_ROUTE),
        schedule.phase_depth(Phase.ROW_FINISH),
    )
    pre = (2 * r - 3, 2 * r, 2 * r - 3)

    if validate:
        report = verify_schedule(g, schedule, pi)
        if not report.passed:
            raise RoutingError(f"Routed schedule failed verification: {report.failures[0]}")

    logger.debug("Routed r=%d: phase depths %s, total %d", r, phase_depths, schedule.depth, extra={"r": r})
    return RoutingResult(
        schedule=schedule,
        depth_pre_elision=sum(pre),
        phase_depths=phase_depths,
        phase_depths_pre_elision=pre,
        routing_graph=routing_graph,
        coloring=coloring,
        column_plans=plans,
        phase_swaps={int(Phase.ROW_SORT): swaps1, int(Phase.ROW_FINISH): swaps3},
    )


def route_many(g: ButterflyGraph, perms: Sequence[Permutation], workers: int = 1,
               validate: bool = True, flow_func: FlowFunction = None) -> List[RoutingResult]:
    """
    Route independent permutations, concurrently when workers > 1.

    Returns:
        List[RoutingResult]: One result per input, in input order.
    """
    if workers <= 1:
        return [route_permutation(g, pi, validate=validate, flow_func=flow_func) for pi in perms]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda pi: route_permutation(g, pi, validate=validate, flow_func=flow_func), perms))
