#!/usr/bin/env python3
"""
Variant interaction graphs: the k-ary cyclic butterfly and the
ring-expanded butterfly.

Only construction and overhead figures live here; no routing procedure is
defined on these graphs.
"""

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import networkx as nx

from src.topology.butterfly import ButterflyGraph, check_dimension, degree_histogram
from src.utils.exceptions import TopologyError
from src.utils.logger import get_logger

logger = get_logger(__name__)

RING_SIZE = 4


class Provenance(str, Enum):
    KARY = "kary"
    RING_EXPANDED = "ring_expanded"


@dataclass(frozen=True)
class VariantGraph:
    """
    A generic undirected variant topology.

    Attributes:
        graph (nx.Graph): The variant graph.
        provenance (Provenance): How it was derived.
        r (int): Dimension of the underlying butterfly.
        k (Optional[int]): Arity for k-ary graphs, None otherwise.
    """
    graph: nx.Graph
    provenance: Provenance
    r: int
    k: Optional[int] = None

    @property
    def n(self) -> int:
        return self.graph.number_of_nodes()

    def degrees(self) -> Dict[int, int]:
        return degree_histogram(self.graph)


def kary_digit(word: int, position: int, r: int, k: int) -> int:
    """Digit `position` of a base-k word of r digits, counted from the most-significant end."""
    return (word // k ** (r - 1 - position)) % k


def build_kary_butterfly(r: int, k: int) -> VariantGraph:
    """
    Build the k-ary cyclic butterfly.

    Nodes are (w, i) with w a base-k word of r digits, linearized as w * r + i.
    (w, i) is joined to (v, i+1 mod r) iff w == v or w and v differ only in
    digit position i. Every node has degree 2k; k = 2 reproduces build_butterfly(r).

    Args:
        r (int): Dimension, at least 3.
        k (int): Arity, at least 2.

    Returns:
        VariantGraph: The k-ary butterfly with provenance KARY.

    Raises:
        TopologyError: If k or r is not an integer, k < 2 or r < 3.
    """
    if not isinstance(k, numbers.Integral) or k < 2:
        raise TopologyError(f"Arity k must be an integer >= 2, got {k!r}")
    check_dimension(r)

    words = k ** r
    graph = nx.Graph()
    graph.add_nodes_from(range(r * words))
    for word in range(words):
        for column in range(r):
            forward = (column + 1) % r
            place = k ** (r - 1 - column)
            base = word - kary_digit(word, column, r, k) * place
            for digit in range(k):
                graph.add_edge(word * r + column, (base + digit * place) * r + forward)

    logger.debug("Built %d-ary butterfly r=%d: %d nodes", k, r, graph.number_of_nodes())
    return VariantGraph(graph=graph, provenance=Provenance.KARY, r=r, k=k)


def ring_expand(g: ButterflyGraph) -> VariantGraph:
    """
    Replace every node by a ring of 4 vertices, each carrying one original edge.

    Ring vertex j of node a is 4a + j. The incident edges of a are attached in
    the order (straight-forward, cross-forward, straight-backward,
    cross-backward) to ring vertices 0..3, so a forward edge leaves from slot 0
    or 1 and enters its far end at slot 2 or 3 respectively.

    Args:
        g (ButterflyGraph): The butterfly to expand.

    Returns:
        VariantGraph: 4n vertices, every vertex of degree 3.
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(RING_SIZE * g.n))
    for a in range(g.n):
        for j in range(RING_SIZE):
            graph.add_edge(RING_SIZE * a + j, RING_SIZE * a + (j + 1) % RING_SIZE)
        straight, cross, _, _ = g.neighbors(a)
        graph.add_edge(RING_SIZE * a + 0, RING_SIZE * straight + 2)
        graph.add_edge(RING_SIZE * a + 1, RING_SIZE * cross + 3)
    return VariantGraph(graph=graph, provenance=Provenance.RING_EXPANDED, r=g.r)


@dataclass(frozen=True)
class OverheadEstimate:
    """Degree and worst-case routing-time figure for one topology family."""
    name: str
    degree: int
    time_overhead: float


def overhead_estimates(r: int, k: int = 3) -> Dict[str, OverheadEstimate]:
    """
    Degree / time-overhead trade-off of the butterfly and its variants at n = r * 2^r.

    The binary butterfly routes in 6r - 6; ring expansion doubles the time at
    degree 3; the k-ary butterfly needs 6 log_k n at degree 2k, and its ring
    expansion (rings of 2k vertices) 6k log_k n at degree 3. Figures only.
    """
    n = r * (1 << r)
    return {
        "butterfly": OverheadEstimate("butterfly", 4, float(6 * r - 6)),
        "ring_expanded": OverheadEstimate("ring_expanded", 3, float(2 * (6 * r - 6))),
        "kary": OverheadEstimate(f"{k}-ary", 2 * k, 6 * math.log(n, k)),
        "kary_ring_expanded": OverheadEstimate(f"{k}-ary ring_expanded", 3, 6 * k * math.log(n, k)),
    }

