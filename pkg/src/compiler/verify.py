#!/usr/bin/env python3
"""
End-to-end check of a compiled program against its circuit.

Placements are tracked layer by layer starting from the program's initial
placement, with blank tokens on every node no logical qubit starts on.
"""

from collections import Counter
from typing import Dict, List, Optional, Tuple

from src.compiler.circuit import Circuit
from src.compiler.program import CompiledProgram
from src.routing.router import depth_bound
from src.routing.schedule import (
    GateLayer,
    Placement,
    VerificationReport,
    execute_layer,
    layer_problems,
)
from src.topology.butterfly import ButterflyGraph
from src.utils.exceptions import CompilationError, ScheduleError

GateRecord = Tuple[int, str, Tuple[int, ...]]


def _initial_tokens(g: ButterflyGraph, p: CompiledProgram) -> Optional[Placement]:
    """Node -> token; logical qubits first, blanks numbered from q in node order. None if invalid."""
    placement: Placement = [None] * g.n
    for qubit, node in enumerate(p.initial_placement):
        if not 0 <= node < g.n or placement[node] is not None:
            return None
        placement[node] = qubit
    blank = p.qubits
    for node in range(g.n):
        if placement[node] is None:
            placement[node] = blank
            blank += 1
    return placement


def verify_program(g: ButterflyGraph, c: Circuit, p: CompiledProgram) -> VerificationReport:
    """
    Simulate a program and check it against the circuit.

    Checks (a) every routing layer against the schedule rules, (b) that every
    gate acts on the nodes currently holding its logical operands and that
    two-qubit gates sit on graph edges, (c) that timestep tags never decrease
    and each timestep executes exactly the circuit's gates, (d) that the
    routing depth before each gate layer stays within 6r - 6.

    Args:
        g (ButterflyGraph): The butterfly.
        c (Circuit): The source circuit.
        p (CompiledProgram): The program to check.

    Returns:
        VerificationReport: Failures carry the layer index and gate label.
    """
    report = VerificationReport(depth=p.depth, max_occupancy=1)
    if p.r != g.r:
        report.fail("structure", f"program is for r={p.r}, graph has r={g.r}")
        return report
    if p.qubits != c.qubits or len(p.initial_placement) != c.qubits:
        report.fail("structure", f"program places {len(p.initial_placement)} qubits, circuit has {c.qubits}")
        return report
    placement = _initial_tokens(g, p)
    if placement is None:
        report.fail("structure", "initial placement is out of range or not injective")
        return report

    worst, _ = depth_bound(g.r)
    expected: Dict[int, Counter] = {
        t: Counter((gate.label, gate.qubits) for gate in step) for t, step in enumerate(c.timesteps)
    }
    seen: Dict[int, Counter] = {}
    last_timestep = -1
    routing = 0

    for index, layer in enumerate(p.layers):
        problems = layer_problems(placement, layer, g)
        if isinstance(layer, GateLayer):
            if routing > worst:
                report.fail("depth", f"{routing} routing layers before this gate layer exceed {worst}", index)
            routing = 0
            for check, message in problems:
                report.fail(check, message, index)
            for op in layer.gates:
                if op.timestep < last_timestep:
                    report.fail("order", f"timestep {op.timestep} gate after timestep {last_timestep}", index, op.label)
                last_timestep = max(last_timestep, op.timestep)
                if any(not 0 <= node < g.n for node in op.nodes):
                    report.fail("gate", f"nodes {op.nodes} out of range", index, op.label)
                    continue
                operands = tuple(placement[node] for node in op.nodes)
                if any(token is None or token >= c.qubits for token in operands):
                    report.fail("gate", f"nodes {op.nodes} do not all hold logical qubits", index, op.label)
                    continue
                seen.setdefault(op.timestep, Counter())[(op.label, operands)] += 1
            continue

        if problems:
            for check, message in problems:
                report.fail(check, message, index)
            continue
        placement, peak = execute_layer(placement, layer)
        report.max_occupancy = max(report.max_occupancy, peak)
        if not layer.is_empty():
            routing += 1

    if routing > worst:
        report.fail("depth", f"{routing} trailing routing layers exceed {worst}")

    for t in sorted(set(expected) | set(seen)):
        want = expected.get(t, Counter())
        got = seen.get(t, Counter())
        if want != got:
            missing = sum((want - got).values())
            extra = sum((got - want).values())
            report.fail("order", f"timestep {t}: {missing} gate(s) missing, {extra} unexpected")

    return report


def extract_gate_sequence(g: ButterflyGraph, c: Circuit, p: CompiledProgram) -> List[GateRecord]:
    """
    The (timestep, label, logical operands) sequence a program executes.

    Raises:
        CompilationError: If the program cannot be simulated.
    """
    placement = _initial_tokens(g, p)
    if placement is None:
        raise CompilationError("Initial placement is out of range or not injective")
    sequence: List[GateRecord] = []
    for index, layer in enumerate(p.layers):
        problems = layer_problems(placement, layer, g)
        if problems:
            check, message = problems[0]
            raise CompilationError(f"Layer {index}: {check}: {message}",
                                   cause=ScheduleError(message, layer_index=index))
        if isinstance(layer, GateLayer):
            for op in layer.gates:
                sequence.append((op.timestep, op.label, tuple(placement[node] for node in op.nodes)))
            continue
        placement, _ = execute_layer(placement, layer)
    return sequence
