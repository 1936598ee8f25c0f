#!/usr/bin/env python3
"""
Routing graph and its proper r-edge-coloring.

The routing graph is a bipartite multigraph with source rows on the left and
destination rows on the right, one edge per qubit. Because it is r-regular it
splits into r perfect matchings; each matching is pulled out with a unit
capacity max-flow and becomes one color. Color c is the qubit's column after
the first row sort.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from src.routing.schedule import Permutation
from src.utils.exceptions import ColoringError, PermutationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

SOURCE = "s"
SINK = "t"


@dataclass(frozen=True)
class RoutingEdge:
    """One qubit: source row u, destination row v."""
    u: int
    v: int
    qubit: int


@dataclass(frozen=True)
class RoutingGraph:
    """
    Bipartite routing multigraph.

    Attributes:
        r (int): Required degree of every node on both sides.
        rows (int): Nodes per side (2^r for butterfly routing).
        edges (Tuple[RoutingEdge, ...]): Parallel edges are distinct entries.
    """
    r: int
    rows: int
    edges: Tuple[RoutingEdge, ...]

    def degrees(self) -> Tuple[List[int], List[int]]:
        """Per-node degrees on the (U, V) sides."""
        left = [0] * self.rows
        right = [0] * self.rows
        for edge in self.edges:
            left[edge.u] += 1
            right[edge.v] += 1
        return left, right

    def is_regular(self) -> bool:
        left, right = self.degrees()
        return all(d == self.r for d in left) and all(d == self.r for d in right)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "rows": self.rows,
            "edges": [[e.u, e.v, e.qubit] for e in self.edges],
        }


@dataclass(frozen=True)
class EdgeColoring:
    """
    Edge colors, positionally aligned with RoutingGraph.edges.

    Attributes:
        colors (Tuple[int, ...]): colors[k] is the color of edge k.
        num_colors (int): Size of the palette.
    """
    colors: Tuple[int, ...]
    num_colors: int

    def color_of(self, edge_index: int) -> int:
        return self.colors[edge_index]

    def classes(self) -> Dict[int, List[int]]:
        """Map color -> edge indices carrying it."""
        grouped: Dict[int, List[int]] = defaultdict(list)
        for index, color in enumerate(self.colors):
            grouped[color].append(index)
        return dict(grouped)


def build_routing_graph(pi: Permutation, r: int) -> RoutingGraph:
    """
    Build the routing graph of a node permutation on the r-dimensional butterfly.

    Edge k belongs to qubit k (the token starting at node k) and joins its
    source row k // r to its destination row pi(k) // r.

    Args:
        pi (Permutation): Permutation of the n = r * 2^r nodes.
        r (int): Butterfly dimension.

    Returns:
        RoutingGraph: r * 2^r edges, degree r on both sides.

    Raises:
        PermutationError: If len(pi) != r * 2^r.
    """
    rows = 1 << r
    if len(pi) != r * rows:
        raise PermutationError(f"Permutation has {len(pi)} points, expected r * 2^r = {r * rows}")
    edges = tuple(RoutingEdge(u=a // r, v=pi(a) // r, qubit=a) for a in range(len(pi)))
    return RoutingGraph(r=r, rows=rows, edges=edges)


def _matching_round(rows: int, remaining: Dict[Tuple[int, int], List[int]],
                    flow_func: Optional[Callable[..., Any]]) -> List[Tuple[int, int]]:
    """Extract one perfect matching of row pairs from the remaining multigraph."""
    network = nx.DiGraph()
    network.add_node(SOURCE)
    for u in range(rows):
        network.add_edge(SOURCE, ("u", u), capacity=1)
    for u, v in sorted(remaining):
        network.add_edge(("u", u), ("v", v), capacity=1)
    for v in range(rows):
        network.add_edge(("v", v), SINK, capacity=1)

    value, flow = nx.maximum_flow(network, SOURCE, SINK, flow_func=flow_func)
    if value != rows:
        raise ColoringError(f"Max-flow found a matching of size {value}, expected {rows}")

    return [
        (u, v)
        for u, v in sorted(remaining)
        if flow[("u", u)].get(("v", v), 0) > 0
    ]


def color_edges(rg: RoutingGraph, flow_func: Optional[Callable[..., Any]] = None) -> EdgeColoring:
    """
    Properly r-color the edges of an r-regular bipartite multigraph.

    Each round builds the unit-capacity network s -> U -> V -> t on the
    remaining edges, takes a maximum flow (a perfect matching by Hall's
    theorem), gives the matched edges the round's color and deletes them.
    Among parallel edges the lowest-index one is matched first.

    Args:
        rg (RoutingGraph): The routing graph.
        flow_func: networkx max-flow function; None means the networkx default.

    Returns:
        EdgeColoring: A proper coloring with rg.r colors.

    Raises:
        ColoringError: If rg is not r-regular or a round yields a short matching.
    """
    if not rg.is_regular():
        raise ColoringError(f"Routing graph is not {rg.r}-regular on both sides")

    remaining: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for index, edge in enumerate(rg.edges):
        remaining[(edge.u, edge.v)].append(index)

    colors = [-1] * len(rg.edges)
    for color in range(rg.r):
        matched = _matching_round(rg.rows, remaining, flow_func)
        for pair in matched:
            colors[remaining[pair].pop(0)] = color
            if not remaining[pair]:
                del remaining[pair]
        logger.debug("Coloring round %d: matched %d row pairs, %d edges left",
                     color, len(matched), sum(len(v) for v in remaining.values()))

    if remaining:
        raise ColoringError(f"{sum(len(v) for v in remaining.values())} edge(s) left uncolored")
    return EdgeColoring(colors=tuple(colors), num_colors=rg.r)


def validate_coloring(rg: RoutingGraph, c: EdgeColoring) -> bool:
    """
    Check that c is a proper coloring of rg with colors in [0, rg.r).

    Args:
        rg (RoutingGraph): The routing graph.
        c (EdgeColoring): Candidate coloring.

    Returns:
        bool: True iff no color repeats at any U or V node and every color is in range.
    """
    if len(c.colors) != len(rg.edges):
        return False
    seen_left: set = set()
    seen_right: set = set()
    for edge, color in zip(rg.edges, c.colors):
        if not 0 <= color < rg.r:
            return False
        if (edge.u, color) in seen_left or (edge.v, color) in seen_right:
            return False
        seen_left.add((edge.u, color))
        seen_right.add((edge.v, color))
    return True


def classes_are_perfect_matchings(rg: RoutingGraph, c: EdgeColoring) -> bool:
    """Every color class covers each source row once and each destination row once."""
    for members in c.classes().values():
        sources: Sequence[int] = sorted(rg.edges[k].u for k in members)
        targets: Sequence[int] = sorted(rg.edges[k].v for k in members)
        if sources != list(range(rg.rows)) or targets != list(range(rg.rows)):
            return False
    return len(c.classes()) == rg.r
