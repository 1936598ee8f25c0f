#!/usr/bin/env python3
"""
Executable schedules: layers of simultaneous local moves, their
ancilla-aware semantics, and the schedule verifier.

A placement maps every node index to the token it holds (None for an empty
node). Between layers a node holds at most one token. Inside a shift layer a
node may transiently hold its departing resident plus one arriving token,
which is the single ancilla per node.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.topology.butterfly import ButterflyGraph
from src.utils.common_functions import as_index
from src.utils.exceptions import PermutationError, ScheduleError
from src.utils.logger import get_logger

logger = get_logger(__name__)

Placement = List[Optional[int]]
NodePair = Tuple[int, int]


@dataclass(frozen=True)
class Permutation:
    """
    A bijection on canonical node indices: image[a] is where the token at a goes.

    Raises:
        PermutationError: If an entry is not an integer or image is not a
            bijection on [0, len(image)).
    """
    image: Tuple[int, ...]

    def __post_init__(self) -> None:
        try:
            image = tuple(as_index(x) for x in self.image)
        except (TypeError, ValueError) as e:
            raise PermutationError(f"Permutation entries must be integers: {e}", cause=e) from e
        object.__setattr__(self, "image", image)
        if sorted(image) != list(range(len(image))):
            raise PermutationError(f"Not a bijection on [0, {len(image)}): {list(image)[:16]}...")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        """Uniformly random permutation drawn from a numpy Generator."""
        return cls(tuple(rng.permutation(n).tolist()))

    def __len__(self) -> int:
        return len(self.image)

    def __call__(self, a: int) -> int:
        return self.image[a]

    def inverse(self) -> "Permutation":
        inverse = [0] * len(self.image)
        for a, b in enumerate(self.image):
            inverse[b] = a
        return Permutation(tuple(inverse))

    def is_identity(self) -> bool:
        return all(a == b for a, b in enumerate(self.image))

    def support(self) -> int:
        """Number of points moved."""
        return sum(1 for a, b in enumerate(self.image) if a != b)


class LayerKind(str, Enum):
    SWAP = "swap"
    SHIFT = "shift"
    GATE = "gate"


class Phase(IntEnum):
    GATE = 0
    ROW_SORT = 1
    COLUMN_ROUTE = 2
    ROW_FINISH = 3


@dataclass(frozen=True)
class GateOp:
    """
    A logical gate bound to the node(s) holding its operands.

    Attributes:
        label (str): Gate name, e.g. "CNOT".
        nodes (Tuple[int, ...]): One node (single-qubit) or two adjacent nodes.
        timestep (int): Index of the circuit timestep the gate belongs to.
    """
    label: str
    nodes: Tuple[int, ...]
    timestep: int = 0


@dataclass(frozen=True)
class SwapLayer:
    """Disjoint SWAPs across graph edges."""
    pairs: Tuple[NodePair, ...]
    phase: int = Phase.ROW_SORT
    kind: ClassVar[LayerKind] = LayerKind.SWAP

    @property
    def moves(self) -> Tuple[NodePair, ...]:
        return self.pairs

    def is_empty(self) -> bool:
        return not self.pairs


@dataclass(frozen=True)
class ShiftLayer:
    """Simultaneous one-directional moves (from, to) across graph edges."""
    moves: Tuple[NodePair, ...]
    phase: int = Phase.COLUMN_ROUTE
    kind: ClassVar[LayerKind] = LayerKind.SHIFT

    def is_empty(self) -> bool:
        return not self.moves


@dataclass(frozen=True)
class GateLayer:
    """Logical gates on disjoint nodes; leaves the placement unchanged."""
    gates: Tuple[GateOp, ...]
    phase: int = Phase.GATE
    kind: ClassVar[LayerKind] = LayerKind.GATE

    def is_empty(self) -> bool:
        return not self.gates


Layer = Union[SwapLayer, ShiftLayer, GateLayer]


@dataclass
class Schedule:
    """
    Ordered layers for an r-dimensional butterfly.

    Attributes:
        r (int): Butterfly dimension.
        layers (List[Layer]): Layers in execution order.
    """
    r: int
    layers: List[Layer] = field(default_factory=list)

    @property
    def depth(self) -> int:
        """Number of layers that contain at least one move or gate."""
        return sum(1 for layer in self.layers if not layer.is_empty())

    def phase_depth(self, phase: int) -> int:
        return sum(1 for layer in self.layers if layer.phase == phase and not layer.is_empty())

    def to_dict(self) -> Dict[str, Any]:
        return {"r": self.r, "layers": [layer_to_dict(layer) for layer in self.layers]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Schedule":
        try:
            return cls(r=as_index(data["r"]), layers=[layer_from_dict(item) for item in data["layers"]])
        except (KeyError, TypeError, ValueError) as e:
            raise ScheduleError(f"Malformed schedule document: {e}", cause=e) from e


def layer_to_dict(layer: Layer) -> Dict[str, Any]:
    """Encode a layer in the schedule JSON format."""
    if isinstance(layer, GateLayer):
        return {
            "kind": layer.kind.value,
            "phase": int(layer.phase),
            "gates": [
                {"gate": op.label, "nodes": list(op.nodes), "timestep": op.timestep}
                for op in layer.gates
            ],
        }
    return {
        "kind": layer.kind.value,
        "phase": int(layer.phase),
        "moves": [list(move) for move in layer.moves],
    }


def layer_from_dict(data: Dict[str, Any]) -> Layer:
    """
    Decode a layer from the schedule JSON format.

    Raises:
        ScheduleError: On an unknown kind or malformed entries.
    """
    if not isinstance(data, dict):
        raise ScheduleError(f"Layer must be an object, got {data!r}")
    kind = data.get("kind")
    try:
        phase = as_index(data.get("phase", 0))
        if kind == LayerKind.GATE.value:
            gates = tuple(
                GateOp(label=str(item["gate"]), nodes=tuple(as_index(x) for x in item["nodes"]),
                       timestep=as_index(item.get("timestep", 0)))
                for item in data.get("gates", [])
            )
            return GateLayer(gates=gates, phase=phase)
        moves = tuple(_pair(item) for item in data.get("moves", []))
    except (AttributeError, KeyError, TypeError, ValueError) as e:
        raise ScheduleError(f"Malformed {kind!r} layer: {e}", cause=e) from e
    if kind == LayerKind.SWAP.value:
        return SwapLayer(pairs=moves, phase=phase)
    if kind == LayerKind.SHIFT.value:
        return ShiftLayer(moves=moves, phase=phase)
    raise ScheduleError(f"Unknown layer kind: {kind!r}")


def _pair(item: Sequence[Any]) -> NodePair:
    if len(item) != 2:
        raise ScheduleError(f"Move must have exactly two nodes, got {item!r}")
    return as_index(item[0]), as_index(item[1])


def identity_placement(n: int) -> Placement:
    """Token a at node a for every node."""
    return list(range(n))


def _is_local(g: ButterflyGraph, a: int, b: int) -> bool:
    return 0 <= a < g.n and 0 <= b < g.n and a != b and g.graph.has_edge(a, b)


def layer_problems(placement: Sequence[Optional[int]], layer: Layer,
                    g: ButterflyGraph) -> List[Tuple[str, str]]:
    """All (check, message) violations of a layer against the current placement."""
    problems: List[Tuple[str, str]] = []

    if isinstance(layer, SwapLayer):
        seen: set = set()
        for a, b in layer.pairs:
            if not _is_local(g, a, b):
                problems.append(("locality", f"swap ({a}, {b}) is not a graph edge"))
            if a in seen or b in seen:
                problems.append(("structure", f"swap ({a}, {b}) overlaps another pair"))
            seen.update((a, b))

    elif isinstance(layer, ShiftLayer):
        sources = [a for a, _ in layer.moves]
        targets = [b for _, b in layer.moves]
        departing = set(sources)
        if len(departing) != len(sources):
            problems.append(("structure", "a node sends more than one token"))
        if len(set(targets)) != len(targets):
            problems.append(("occupancy", "a node receives more than one token"))
        for a, b in layer.moves:
            if not _is_local(g, a, b):
                problems.append(("locality", f"move {a} -> {b} is not a graph edge"))
                continue
            if placement[a] is None:
                problems.append(("occupancy", f"move {a} -> {b} departs from an empty node"))
            if placement[b] is not None and b not in departing:
                problems.append(("occupancy", f"move {a} -> {b} lands on node {b} whose resident stays"))

    elif isinstance(layer, GateLayer):
        seen = set()
        for op in layer.gates:
            if len(op.nodes) not in (1, 2):
                problems.append(("structure", f"gate {op.label} binds {len(op.nodes)} nodes"))
                continue
            if any(not 0 <= node < g.n for node in op.nodes):
                problems.append(("locality", f"gate {op.label} on {op.nodes} names a node outside the graph"))
                continue
            if len(op.nodes) == 2 and not _is_local(g, *op.nodes):
                problems.append(("locality", f"gate {op.label} on {op.nodes} is not a graph edge"))
            if any(node in seen for node in op.nodes):
                problems.append(("structure", f"gate {op.label} on {op.nodes} overlaps another gate"))
            seen.update(op.nodes)

    else:
        problems.append(("structure", f"unknown layer type {type(layer).__name__}"))

    return problems


def execute_layer(placement: Sequence[Optional[int]], layer: Layer) -> Tuple[Placement, int]:
    """Apply a structurally valid layer; returns the new placement and the peak node occupancy."""
    result = list(placement)
    if isinstance(layer, SwapLayer):
        for a, b in layer.pairs:
            result[a], result[b] = result[b], result[a]
        return result, 1
    if isinstance(layer, ShiftLayer):
        peak = 1
        for a, _ in layer.moves:
            result[a] = None
        for a, b in layer.moves:
            if placement[b] is not None:
                peak = 2  # resident still present while the arrival lands in the ancilla
            result[b] = placement[a]
        return result, peak
    return result, 1


def apply_layer(placement: Sequence[Optional[int]], layer: Layer, g: ButterflyGraph) -> Placement:
    """
    Execute one layer.

    SwapLayer exchanges node contents pairwise, ShiftLayer moves every source's
    token into its target simultaneously, GateLayer leaves the placement as is.

    Args:
        placement: Node -> token (None for empty).
        layer: The layer to execute.
        g: The interaction graph.

    Returns:
        Placement: The placement after the layer.

    Raises:
        ScheduleError: On a non-edge move, overlapping pairs, an empty shift
            source, or a shift target whose resident does not depart.
    """
    problems = layer_problems(placement, layer, g)
    if problems:
        check, message = problems[0]
        raise ScheduleError(f"{check}: {message}")
    result, _ = execute_layer(placement, layer)
    return result


@dataclass(frozen=True)
class VerificationFailure:
    """One failed check, located by layer index (None for end-of-schedule checks)."""
    check: str
    message: str
    layer_index: Optional[int] = None
    gate: Optional[str] = None

    def __str__(self) -> str:
        where = f"layer {self.layer_index}" if self.layer_index is not None else "schedule"
        gate = f" [{self.gate}]" if self.gate else ""
        return f"{where}{gate}: {self.check}: {self.message}"


@dataclass
class VerificationReport:
    """
    Outcome of verifying a schedule or program.

    Attributes:
        depth (int): Measured depth (non-empty layers).
        max_occupancy (int): Largest transient token count seen at any node.
        failures (List[VerificationFailure]): Every failed check.
    """
    depth: int = 0
    max_occupancy: int = 0
    failures: List[VerificationFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, message: str, layer_index: Optional[int] = None,
             gate: Optional[str] = None) -> None:
        self.failures.append(VerificationFailure(check, message, layer_index, gate))

    def checks_failed(self) -> List[str]:
        return sorted({failure.check for failure in self.failures})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "depth": self.depth,
            "max_occupancy": self.max_occupancy,
            "failures": [
                {"check": f.check, "message": f.message, "layer": f.layer_index, "gate": f.gate}
                for f in self.failures
            ],
        }


def verify_schedule(g: ButterflyGraph, s: Schedule, target: Permutation) -> VerificationReport:
    """
    Verify a schedule against a graph and a target permutation.

    Checks (a) locality of every move, pair and gate, (b) occupancy (at most 2
    tokens per node inside a layer, at most 1 between layers), (c) that the
    token starting at a ends at target(a), and reports (d) the measured depth.
    Malformed layers are reported and skipped; nothing is raised.

    Args:
        g: The interaction graph.
        s: The schedule to check.
        target: The permutation the schedule should realize.

    Returns:
        VerificationReport: passed iff (a), (b) and (c) all hold.
    """
    report = VerificationReport(depth=s.depth, max_occupancy=1 if g.n else 0)

    if s.r != g.r:
        report.fail("structure", f"schedule is for r={s.r}, graph has r={g.r}")
        return report
    if len(target) != g.n:
        report.fail("structure", f"target permutation has {len(target)} points, graph has {g.n} nodes")
        return report

    placement = identity_placement(g.n)
    for index, layer in enumerate(s.layers):
        problems = layer_problems(placement, layer, g)
        if problems:
            for check, message in problems:
                report.fail(check, message, layer_index=index)
            continue
        placement, peak = execute_layer(placement, layer)
        report.max_occupancy = max(report.max_occupancy, peak)

    misplaced = [a for a in range(g.n) if placement[target(a)] != a]
    if misplaced:
        report.fail("correctness", f"{len(misplaced)} token(s) not at their target, first: {misplaced[:8]}")

    logger.debug("Verified schedule r=%d: depth=%d passed=%s", g.r, report.depth, report.passed)
    return report
