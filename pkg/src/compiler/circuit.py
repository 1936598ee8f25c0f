#!/usr/bin/env python3
"""
Logical circuit model: timesteps of one- and two-qubit gates.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.utils.common_functions import as_index
from src.utils.exceptions import CompilationError

DEFAULT_TWO_QUBIT_GATE = "CNOT"
DEFAULT_SINGLE_QUBIT_GATE = "H"


@dataclass(frozen=True)
class Gate:
    """
    Attributes:
        label (str): Gate name.
        qubits (Tuple[int, ...]): One or two logical operands, in order.
    """
    label: str
    qubits: Tuple[int, ...]

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2

    def to_dict(self) -> Dict[str, Any]:
        return {"gate": self.label, "q": list(self.qubits)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Gate":
        return cls(label=str(data["gate"]), qubits=tuple(as_index(x) for x in data["q"]))


@dataclass
class Circuit:
    """
    A logical circuit on `qubits` logical qubits.

    Attributes:
        qubits (int): Logical qubit count q.
        timesteps (List[List[Gate]]): Gates of each timestep; no qubit twice in one timestep.
    """
    qubits: int
    timesteps: List[List[Gate]] = field(default_factory=list)

    @property
    def gate_count(self) -> int:
        return sum(len(step) for step in self.timesteps)

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for step in self.timesteps for gate in step if gate.is_two_qubit)

    def validate(self, n: Optional[int] = None) -> None:
        """
        Check the circuit invariants.

        Args:
            n: Node count of the target graph, if known (q must not exceed it).

        Raises:
            CompilationError: On out-of-range operands, repeated operands, a qubit
                used twice in one timestep, bad arity, or q > n.
        """
        if self.qubits < 0:
            raise CompilationError(f"Qubit count must be non-negative, got {self.qubits}")
        if n is not None and self.qubits > n:
            raise CompilationError(f"Circuit uses {self.qubits} qubits but the graph has only {n} nodes")
        for t, step in enumerate(self.timesteps):
            busy: set = set()
            for gate in step:
                if len(gate.qubits) not in (1, 2):
                    raise CompilationError(f"Timestep {t}: gate {gate.label} has {len(gate.qubits)} operands")
                if len(set(gate.qubits)) != len(gate.qubits):
                    raise CompilationError(f"Timestep {t}: gate {gate.label} repeats an operand {gate.qubits}")
                for qubit in gate.qubits:
                    if not 0 <= qubit < self.qubits:
                        raise CompilationError(f"Timestep {t}: qubit {qubit} out of range [0, {self.qubits})")
                    if qubit in busy:
                        raise CompilationError(f"Timestep {t}: qubit {qubit} appears in two gates")
                    busy.add(qubit)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "qubits": self.qubits,
            "timesteps": [[gate.to_dict() for gate in step] for step in self.timesteps],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Circuit":
        """
        Raises:
            CompilationError: If the document is malformed.
        """
        try:
            return cls(
                qubits=as_index(data["qubits"]),
                timesteps=[[Gate.from_dict(item) for item in step] for step in data["timesteps"]],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CompilationError(f"Malformed circuit document: {e}", cause=e) from e


def random_circuit(qubits: int, timesteps: int, max_gates: int, rng: np.random.Generator,
                   single_qubit_gates: int = 0) -> Circuit:
    """
    A random circuit: every timestep pairs up to `max_gates` disjoint random
    qubit pairs, then puts single-qubit gates on up to `single_qubit_gates`
    of the qubits left idle.
    """
    steps: List[List[Gate]] = []
    for _ in range(timesteps):
        order = rng.permutation(qubits).tolist()
        pairs = min(max_gates, qubits // 2)
        step = [Gate(DEFAULT_TWO_QUBIT_GATE, (order[2 * k], order[2 * k + 1])) for k in range(pairs)]
        idle = order[2 * pairs:]
        step.extend(Gate(DEFAULT_SINGLE_QUBIT_GATE, (qubit,)) for qubit in idle[:single_qubit_gates])
        steps.append(step)
    return Circuit(qubits=qubits, timesteps=steps)
