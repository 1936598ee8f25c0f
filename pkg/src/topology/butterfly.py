#!/usr/bin/env python3
"""
Cyclic (wrapped) butterfly interaction graph.

The n = r * 2^r nodes are pairs (w, i): w is an r-bit row word and i a
column index mod r. Node (w, i) is joined to (v, i+1 mod r) when w == v
(straight edge) or when w and v differ exactly in bit position i (cross
edge). Bit positions count from the most-significant end of the printed
word, so position 0 is the leading bit.

Nodes are linearized as row * r + column, which keeps rows contiguous.
"""

import numbers
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Tuple

import networkx as nx

from src.utils.exceptions import TopologyError
from src.utils.logger import get_logger

logger = get_logger(__name__)

MIN_DIMENSION = 3


class EdgeKind(str, Enum):
    STRAIGHT = "straight"
    CROSS = "cross"


def bit_mask(position: int, r: int) -> int:
    """
    Mask of bit `position` in an r-bit word, counted from the most-significant end.

    Args:
        position (int): Bit position in [0, r).
        r (int): Word width.

    Returns:
        int: The single-bit mask.
    """
    return 1 << (r - 1 - position)


def format_word(word: int, r: int) -> str:
    """Print an r-bit word as a zero-padded binary string."""
    return format(word, f"0{r}b")


@dataclass(frozen=True, order=True)
class NodeId:
    """
    A butterfly vertex.

    Attributes:
        row (int): Row word w in [0, 2^r).
        column (int): Column index i in [0, r).
    """
    row: int
    column: int

    def index(self, r: int) -> int:
        """Canonical linear index row * r + column."""
        return self.row * r + self.column

    @classmethod
    def from_index(cls, index: int, r: int) -> "NodeId":
        """Inverse of index()."""
        row, column = divmod(index, r)
        return cls(row, column)

    def label(self, r: int) -> str:
        """DOT-style name "w:i" with w printed as an r-bit binary string."""
        return f"{format_word(self.row, r)}:{self.column}"

    def is_valid(self, r: int) -> bool:
        return 0 <= self.row < (1 << r) and 0 <= self.column < r


@dataclass(frozen=True)
class ButterflyGraph:
    """
    The r-dimensional cyclic butterfly. Immutable after construction.

    Attributes:
        r (int): Dimension, at least 3.
        graph (nx.Graph): Undirected graph over canonical indices; each edge
            carries a `kind` attribute (EdgeKind).
    """
    r: int
    graph: nx.Graph = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.r * (1 << self.r)

    @property
    def rows(self) -> int:
        return 1 << self.r

    def node(self, index: int) -> NodeId:
        return NodeId.from_index(index, self.r)

    def index(self, node: NodeId) -> int:
        return node.index(self.r)

    def neighbors(self, index: int) -> Tuple[int, int, int, int]:
        """
        Neighbors of a node in the fixed order
        (straight-forward, cross-forward, straight-backward, cross-backward).
        """
        return self._neighbor_table[index]

    def edge_kind(self, a: int, b: int) -> EdgeKind:
        """
        Classify the edge {a, b}.

        Raises:
            TopologyError: If {a, b} is not an edge.
        """
        data = self.graph.get_edge_data(a, b)
        if data is None:
            raise TopologyError(f"{self.node(a).label(self.r)} and {self.node(b).label(self.r)} are not adjacent")
        return data["kind"]

    def edges(self) -> List[Tuple[int, int]]:
        """All edges as sorted canonical pairs (a < b)."""
        return sorted((min(a, b), max(a, b)) for a, b in self.graph.edges())

    def nodes(self) -> Iterator[NodeId]:
        for index in range(self.n):
            yield self.node(index)

    def to_networkx(self) -> nx.Graph:
        return self.graph

    @cached_property
    def _neighbor_table(self) -> Tuple[Tuple[int, int, int, int], ...]:
        return tuple(_ordered_neighbors(index, self.r) for index in range(self.n))


def _ordered_neighbors(index: int, r: int) -> Tuple[int, int, int, int]:
    row, column = divmod(index, r)
    forward = (column + 1) % r
    backward = (column - 1) % r
    return (
        row * r + forward,
        (row ^ bit_mask(column, r)) * r + forward,
        row * r + backward,
        (row ^ bit_mask(backward, r)) * r + backward,
    )


def check_dimension(r: int) -> None:
    """Raise TopologyError unless r is an integer of at least MIN_DIMENSION."""
    if not isinstance(r, numbers.Integral) or r < MIN_DIMENSION:
        # r = 2 yields parallel edges, r = 1 self-loops
        raise TopologyError(f"Butterfly dimension must be an integer >= {MIN_DIMENSION}, got {r!r}")


@lru_cache(maxsize=None)
def build_butterfly(r: int) -> ButterflyGraph:
    """
    Build the r-dimensional cyclic butterfly.

    Args:
        r (int): Dimension, at least 3.

    Returns:
        ButterflyGraph: n = r * 2^r nodes, every node of degree 4.

    Raises:
        TopologyError: If r < 3.
    """
    check_dimension(r)
    n = r * (1 << r)
    graph = nx.Graph(r=r)
    for index in range(n):
        row, column = divmod(index, r)
        graph.add_node(index, row=row, column=column)
    for index in range(n):
        straight, cross, _, _ = _ordered_neighbors(index, r)
        graph.add_edge(index, straight, kind=EdgeKind.STRAIGHT)
        graph.add_edge(index, cross, kind=EdgeKind.CROSS)
    logger.debug("Built cyclic butterfly r=%d: %d nodes, %d edges", r, n, graph.number_of_edges())
    return ButterflyGraph(r=int(r), graph=nx.freeze(graph))


def is_edge(g: ButterflyGraph, a: NodeId, b: NodeId) -> bool:
    """
    Whether {a, b} is an edge of g. False for a == b.

    Args:
        g (ButterflyGraph): The graph.
        a (NodeId): First node.
        b (NodeId): Second node.

    Returns:
        bool: True iff the edge rule holds.
    """
    if a == b:
        return False
    return g.graph.has_edge(a.index(g.r), b.index(g.r))


def hypercube(r: int) -> nx.Graph:
    """
    The r-dimensional hypercube Q_r on integer labels: u ~ v iff they differ in one bit.
    """
    cube = nx.Graph()
    cube.add_nodes_from(range(1 << r))
    for u in range(1 << r):
        for bit in range(r):
            v = u ^ (1 << bit)
            if u < v:
                cube.add_edge(u, v)
    return cube


def quotient_rows(g: ButterflyGraph) -> nx.Graph:
    """
    Merge the r nodes of every row into one node.

    Args:
        g (ButterflyGraph): The butterfly.

    Returns:
        nx.Graph: Graph on the 2^r row words; rows u != v are adjacent iff some
        butterfly edge joins them. Equal to Q_r under identity labelling.
    """
    quotient = nx.Graph()
    quotient.add_nodes_from(range(g.rows))
    for a, b in g.graph.edges():
        u, v = a // g.r, b // g.r
        if u != v:
            quotient.add_edge(u, v)
    return quotient


def quotient_is_hypercube(g: ButterflyGraph) -> bool:
    """Whether quotient_rows(g) equals Q_r under the identity labelling."""
    def edge_set(graph: nx.Graph) -> set:
        return {(min(a, b), max(a, b)) for a, b in graph.edges()}

    quotient = quotient_rows(g)
    return set(quotient.nodes()) == set(range(g.rows)) and edge_set(quotient) == edge_set(hypercube(g.r))


def rotate_word_right(word: int, r: int) -> int:
    """Rotate an r-bit word right by one position (the trailing bit wraps to the front)."""
    return (word >> 1) | ((word & 1) << (r - 1))


def is_row_cyclic_invariant(g: ButterflyGraph) -> bool:
    """
    Check that (w, i) -> (rotate_right(w), i + 1 mod r) is an automorphism of g.

    This column-rotation symmetry is what lets every column run a Benes
    traversal at the same time, phase-shifted by one column each.
    """
    r = g.r

    def rotate(index: int) -> int:
        row, column = divmod(index, r)
        return rotate_word_right(row, r) * r + (column + 1) % r

    return all(g.graph.has_edge(rotate(a), rotate(b)) for a, b in g.graph.edges())


def minimal_dimension(qubits: int) -> int:
    """
    Smallest r >= 3 with r * 2^r >= qubits.

    Args:
        qubits (int): Logical qubit count.

    Returns:
        int: The minimal butterfly dimension.
    """
    if qubits < 0:
        raise TopologyError(f"Qubit count must be non-negative, got {qubits}")
    r = MIN_DIMENSION
    while r * (1 << r) < qubits:
        r += 1
    return r


def degree_histogram(graph: nx.Graph) -> Dict[int, int]:
    """Map degree -> number of nodes with that degree."""
    histogram: Dict[int, int] = {}
    for _, degree in graph.degree():
        histogram[degree] = histogram.get(degree, 0) + 1
    return histogram
