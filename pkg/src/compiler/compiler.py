#!/usr/bin/env python3
"""
Circuit compiler for the cyclic butterfly.

Every timestep becomes one routing permutation that parks each gate's two
operands on the endpoints of a dedicated edge of a fixed set of pairwise
disjoint edges, followed by one gate layer. Placements chain from one
timestep to the next. Nodes not holding a logical qubit carry blank tokens
that are routed like qubits.
"""

from functools import lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from src.compiler.circuit import Circuit, Gate
from src.compiler.program import CompiledProgram, RoundInfo
from src.compiler.verify import verify_program
from src.routing.router import route_permutation
from src.routing.schedule import GateLayer, GateOp, Permutation, Phase
from src.topology.butterfly import ButterflyGraph, build_butterfly
from src.utils.exceptions import CompilationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

Edge = Tuple[int, int]


@lru_cache(maxsize=None)
def _matching_for(r: int) -> Tuple[Edge, ...]:
    matching = nx.max_weight_matching(build_butterfly(r).graph, maxcardinality=True)
    return tuple(sorted((min(a, b), max(a, b)) for a, b in matching))


def maximum_disjoint_edges(g: ButterflyGraph) -> Tuple[Edge, ...]:
    """
    A maximum set of pairwise node-disjoint edges of g, as sorted canonical pairs.

    Computed once per dimension.
    """
    edges = _matching_for(g.r)
    logger.debug("Disjoint edge set for r=%d: %d edges (n/2 = %d)", g.r, len(edges), g.n // 2)
    return edges


def _assign_on_matching(g: ButterflyGraph, node_of: Sequence[int], gates: Sequence[Gate],
                        edges: Sequence[Edge], keep_adjacent: bool) -> Optional[Dict[int, int]]:
    """Token -> destination node for the gate operands, or None if the edges run out."""
    dest: Dict[int, int] = {}
    used: set = set()
    pending: List[Gate] = []
    for gate in gates:
        a, b = gate.qubits
        if keep_adjacent and g.graph.has_edge(node_of[a], node_of[b]):
            dest[a], dest[b] = node_of[a], node_of[b]
            used.update((node_of[a], node_of[b]))
        else:
            pending.append(gate)

    free = [edge for edge in edges if edge[0] not in used and edge[1] not in used]
    if len(free) < len(pending):
        return None

    taken = [False] * len(free)
    for gate in pending:
        a, b = gate.qubits
        choice = None
        for k, (x, y) in enumerate(free):
            if taken[k]:
                continue
            if x == node_of[a] or y == node_of[b]:
                choice = (k, x, y)
                break
            if y == node_of[a] or x == node_of[b]:
                choice = (k, y, x)
                break
        if choice is None:
            k = taken.index(False)
            choice = (k, free[k][0], free[k][1])
        k, x, y = choice
        taken[k] = True
        dest[a], dest[b] = x, y
    return dest


def assign_destinations(g: ButterflyGraph, placement: Sequence[int], gates: Sequence[Gate],
                        edges: Optional[Sequence[Edge]] = None) -> Permutation:
    """
    Choose a node permutation that makes every two-qubit gate local.

    Gate pairs that are already adjacent stay put; every other pair is parked
    on a free disjoint edge, preferably one touching a node it already holds.
    Idle tokens keep their node when nobody claims it and otherwise fill the
    leftover nodes in ascending order.

    Args:
        g (ButterflyGraph): The butterfly.
        placement: Token -> node for all n tokens (logical qubits then blanks).
        gates: The gates of one round; single-qubit gates are ignored.
        edges: Disjoint edge set; defaults to maximum_disjoint_edges(g).

    Returns:
        Permutation: pi on nodes with pi(current node) = destination node.

    Raises:
        CompilationError: If there are more two-qubit gates than disjoint edges.
    """
    if edges is None:
        edges = maximum_disjoint_edges(g)
    two = [gate for gate in gates if gate.is_two_qubit]
    if len(two) > len(edges):
        raise CompilationError(f"{len(two)} two-qubit gates exceed the {len(edges)} available disjoint edges")

    dest = _assign_on_matching(g, placement, two, edges, keep_adjacent=True)
    if dest is None:
        dest = _assign_on_matching(g, placement, two, edges, keep_adjacent=False)
    if dest is None:
        raise CompilationError("Could not place the gate pairs on disjoint edges")

    claimed = set(dest.values())
    movers: List[int] = []
    for token, node in enumerate(placement):
        if token in dest:
            continue
        if node not in claimed:
            dest[token] = node
            claimed.add(node)
        else:
            movers.append(token)
    vacant = (node for node in range(g.n) if node not in claimed)
    for token in movers:
        dest[token] = next(vacant)

    image = [0] * g.n
    for token, node in enumerate(placement):
        image[node] = dest[token]
    return Permutation(tuple(image))


def compile_circuit(g: ButterflyGraph, c: Circuit, validate: bool = True,
                    flow_func: Optional[Callable[..., Any]] = None) -> CompiledProgram:
    """
    Compile a circuit into routing and gate layers on g.

    Logical qubit a starts at node a. For each timestep the two-qubit gates are
    cut into rounds of at most |disjoint edges| gates; each round is routed
    and followed by its gate layer. Single-qubit gates run in the first round's
    gate layer.

    Args:
        g (ButterflyGraph): The butterfly.
        c (Circuit): The logical circuit.
        validate (bool): Validate routing and verify the finished program.
        flow_func: networkx max-flow function for the edge coloring.

    Returns:
        CompiledProgram: The program.

    Raises:
        CompilationError: On an invalid circuit or a failed program verification.
    """
    c.validate(g.n)
    edges = maximum_disjoint_edges(g)
    node_of = list(range(g.n))
    program = CompiledProgram(r=g.r, qubits=c.qubits, initial_placement=list(range(c.qubits)))

    for t, step in enumerate(c.timesteps):
        two = [gate for gate in step if gate.is_two_qubit]
        single = [gate for gate in step if not gate.is_two_qubit]
        chunks = [two[k: k + len(edges)] for k in range(0, len(two), len(edges))] or [[]]
        if len(chunks) > 1:
            logger.debug("Timestep %d split into %d rounds", t, len(chunks))

        for k, chunk in enumerate(chunks):
            pi = assign_destinations(g, node_of, chunk, edges)
            result = route_permutation(g, pi, validate=validate, flow_func=flow_func)
            program.layers.extend(result.schedule.layers)
            node_of = [pi(node) for node in node_of]

            ops = [GateOp(gate.label, (node_of[gate.qubits[0]], node_of[gate.qubits[1]]), t) for gate in chunk]
            if k == 0:
                ops.extend(GateOp(gate.label, (node_of[gate.qubits[0]],), t) for gate in single)
            if ops:
                program.layers.append(GateLayer(gates=tuple(ops), phase=Phase.GATE))
            program.rounds.append(RoundInfo(t, k, result.depth_post_elision, len(ops)))

    if validate:
        report = verify_program(g, c, program)
        if not report.passed:
            raise CompilationError(f"Compiled program failed verification: {report.failures[0]}")

    logger.debug("Compiled %d timesteps on r=%d: depth %d", len(c.timesteps), g.r, program.depth)
    return program
