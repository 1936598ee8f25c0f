#!/usr/bin/env python3
"""
Compiled program model and its JSON form.

The JSON document extends the schedule format with the logical qubit count,
the initial placement and per-round depth accounting:

    {"r": 3, "qubits": 24, "initial_placement": [...],
     "layers": [{"kind": "swap", "phase": 1, "moves": [[0, 1]]},
                {"kind": "gate", "phase": 0,
                 "gates": [{"gate": "CNOT", "nodes": [0, 1], "timestep": 0}]}],
     "rounds": [{"timestep": 0, "round": 0, "routing_depth": 1, "gates": 1}]}
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

from src.routing.schedule import GateLayer, Layer, layer_from_dict, layer_to_dict
from src.utils.common_functions import as_index
from src.utils.exceptions import CompilationError, ScheduleError


@dataclass(frozen=True)
class RoundInfo:
    """One routed round: a timestep (or a slice of an oversized one) and its routing depth."""
    timestep: int
    round: int
    routing_depth: int
    gates: int


@dataclass
class CompiledProgram:
    """
    Attributes:
        r (int): Butterfly dimension.
        qubits (int): Logical qubit count.
        initial_placement (List[int]): Logical qubit -> node at the start.
        layers (List[Layer]): Routing layers interleaved with gate layers.
        rounds (List[RoundInfo]): Depth accounting per routed round.
    """
    r: int
    qubits: int
    initial_placement: List[int]
    layers: List[Layer] = field(default_factory=list)
    rounds: List[RoundInfo] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return sum(1 for layer in self.layers if not layer.is_empty())

    @property
    def routing_depth(self) -> int:
        return sum(1 for layer in self.layers if not isinstance(layer, GateLayer) and not layer.is_empty())

    def max_round_depth(self) -> int:
        return max((info.routing_depth for info in self.rounds), default=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "qubits": self.qubits,
            "initial_placement": list(self.initial_placement),
            "layers": [layer_to_dict(layer) for layer in self.layers],
            "rounds": [
                {"timestep": i.timestep, "round": i.round, "routing_depth": i.routing_depth, "gates": i.gates}
                for i in self.rounds
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CompiledProgram":
        """
        Raises:
            CompilationError: If the document is malformed.
        """
        try:
            return cls(
                r=as_index(data["r"]),
                qubits=as_index(data["qubits"]),
                initial_placement=[as_index(x) for x in data["initial_placement"]],
                layers=[layer_from_dict(item) for item in data["layers"]],
                rounds=[
                    RoundInfo(as_index(i["timestep"]), as_index(i["round"]), as_index(i["routing_depth"]),
                              as_index(i.get("gates", 0)))
                    for i in data.get("rounds", [])
                ],
            )
        except (AttributeError, KeyError, TypeError, ValueError, ScheduleError) as e:
            raise CompilationError(f"Malformed program document: {e}", cause=e) from e
