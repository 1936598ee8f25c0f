#!/usr/bin/env python3
"""
Graph export: DOT for visualization and a JSON adjacency list keyed by
canonical index.
"""

from typing import Dict, List, Union

from src.topology.butterfly import ButterflyGraph, NodeId, format_word
from src.topology.variants import RING_SIZE, Provenance, VariantGraph, kary_digit

AnyGraph = Union[ButterflyGraph, VariantGraph]


def node_name(g: AnyGraph, index: int) -> str:
    """
    Display name of a node.

    Butterfly nodes print as "w:i" (w in binary), k-ary nodes as "d...d:i"
    (w in base k), ring vertices as "w:i#j" (j the ring slot).
    """
    if isinstance(g, ButterflyGraph):
        return NodeId.from_index(index, g.r).label(g.r)
    if g.provenance is Provenance.RING_EXPANDED:
        node, slot = divmod(index, RING_SIZE)
        return f"{NodeId.from_index(node, g.r).label(g.r)}#{slot}"
    word, column = divmod(index, g.r)
    if g.k == 2:
        return f"{format_word(word, g.r)}:{column}"
    digits = "".join(str(kary_digit(word, p, g.r, g.k)) for p in range(g.r))
    return f"{digits}:{column}"


def to_dot(g: AnyGraph) -> str:
    """
    Render the graph as an undirected DOT document.

    Butterfly edges carry a `kind` attribute (straight / cross).

    Args:
        g: Butterfly or variant graph.

    Returns:
        str: DOT source.
    """
    graph = g.graph
    if isinstance(g, ButterflyGraph):
        title = f"butterfly_r{g.r}"
    else:
        title = f"{g.provenance.value}_r{g.r}" + (f"_k{g.k}" if g.k else "")

    lines = [f"graph {title} {{"]
    for index in sorted(graph.nodes()):
        lines.append(f'  "{node_name(g, index)}";')
    for a, b in sorted((min(e), max(e)) for e in graph.edges()):
        kind = graph.edges[a, b].get("kind")
        attrs = f" [kind={kind.value}]" if kind is not None else ""
        lines.append(f'  "{node_name(g, a)}" -- "{node_name(g, b)}"{attrs};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_adjacency(g: AnyGraph) -> Dict[str, List[int]]:
    """
    JSON adjacency list keyed by canonical index (as a string), neighbors sorted.

    Args:
        g: Butterfly or variant graph.

    Returns:
        Dict[str, List[int]]: index -> sorted neighbor indices.
    """
    graph = g.graph
    return {str(index): sorted(graph.neighbors(index)) for index in sorted(graph.nodes())}
