#!/usr/bin/env python3
"""
Comparator networks: insertion sort on a path and bitonic sort on the
hypercube, plus execution on concrete keys.

A comparator (a, b) leaves the smaller key at position a. Executing a
network records, per stage, exactly the comparators that swapped; those
records become the SWAP layers of the row-sorting phases.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, List, Sequence, Tuple, TypeVar

import numpy as np

from src.utils.exceptions import SortingNetworkError

K = TypeVar("K")
Comparator = Tuple[int, int]
Stage = Tuple[Comparator, ...]

ZERO_ONE_LIMIT = 20


class HostConstraint(str, Enum):
    PATH = "path"
    HYPERCUBE = "hypercube"


@dataclass(frozen=True)
class ComparatorNetwork:
    """
    Attributes:
        width (int): Number of positions m.
        stages (Tuple[Stage, ...]): Position-disjoint comparator stages.
        host (HostConstraint): Which positions a comparator may join.
    """
    width: int
    stages: Tuple[Stage, ...]
    host: HostConstraint

    @property
    def depth(self) -> int:
        return len(self.stages)

    @property
    def size(self) -> int:
        return sum(len(stage) for stage in self.stages)

    def is_host_local(self) -> bool:
        """Path networks join |a - b| = 1; hypercube networks join Hamming distance 1."""
        for stage in self.stages:
            for a, b in stage:
                if self.host is HostConstraint.PATH and abs(a - b) != 1:
                    return False
                if self.host is HostConstraint.HYPERCUBE and bin(a ^ b).count("1") != 1:
                    return False
        return True

    def is_stagewise_disjoint(self) -> bool:
        for stage in self.stages:
            touched = [p for comparator in stage for p in comparator]
            if len(set(touched)) != len(touched):
                return False
        return True


def comparator(x: K, y: K) -> Tuple[K, K]:
    """Return the pair in ascending order; equal keys are not swapped."""
    if y < x:
        return y, x
    return x, y


@lru_cache(maxsize=None)
def insertion_network(m: int) -> ComparatorNetwork:
    """
    The parallel insertion (equivalently bubble) sort on a path of m positions.

    Comparator (j, j+1) fires at stage s iff s = j (mod 2) and
    j <= s <= 2m - 4 - j, giving the familiar diamond of depth 2m - 3.

    Args:
        m (int): Width, at least 2.

    Returns:
        ComparatorNetwork: Path-adjacent network of depth 2m - 3.

    Raises:
        SortingNetworkError: If m < 2.
    """
    if m < 2:
        raise SortingNetworkError(f"Insertion network needs m >= 2, got {m}")
    stages = []
    for s in range(2 * m - 3):
        stages.append(tuple(
            (j, j + 1)
            for j in range(s % 2, m - 1, 2)
            if j <= s <= 2 * m - 4 - j
        ))
    return ComparatorNetwork(width=m, stages=tuple(stages), host=HostConstraint.PATH)


@lru_cache(maxsize=None)
def bitonic_network(m: int) -> ComparatorNetwork:
    """
    Bitonic sort on m = 2^k positions wired as the k-dimensional hypercube.

    Args:
        m (int): Width, a power of two with k >= 1.

    Returns:
        ComparatorNetwork: Hypercube-adjacent network of depth k(k+1)/2.

    Raises:
        SortingNetworkError: If m is not a power of two >= 2.
    """
    if m < 2 or m & (m - 1):
        raise SortingNetworkError(f"Bitonic network needs a power of two >= 2, got {m}")
    k = m.bit_length() - 1
    stages = []
    for block in range(1, k + 1):
        for j in range(block - 1, -1, -1):
            stage = []
            for i in range(m):
                if i & (1 << j):
                    continue
                partner = i | (1 << j)
                if i & (1 << block):
                    stage.append((partner, i))
                else:
                    stage.append((i, partner))
            stages.append(tuple(stage))
    return ComparatorNetwork(width=m, stages=tuple(stages), host=HostConstraint.HYPERCUBE)


def run_network(net: ComparatorNetwork, keys: Sequence[K]) -> Tuple[List[K], List[Stage]]:
    """
    Execute a network on concrete keys.

    Args:
        net (ComparatorNetwork): The network.
        keys: Input keys, len(keys) == net.width.

    Returns:
        Tuple[List[K], List[Stage]]: The output keys and, per stage, the
        comparators that swapped (empty tuples for idle stages).

    Raises:
        SortingNetworkError: On a length mismatch.
    """
    if len(keys) != net.width:
        raise SortingNetworkError(f"Network width is {net.width}, got {len(keys)} keys")
    values = list(keys)
    executed: List[Stage] = []
    for stage in net.stages:
        fired = []
        for a, b in stage:
            if values[b] < values[a]:
                values[a], values[b] = values[b], values[a]
                fired.append((a, b))
        executed.append(tuple(fired))
    return values, executed


def replay_swaps(keys: Sequence[K], executed: Sequence[Stage]) -> List[K]:
    """Apply recorded swaps unconditionally, as transpositions."""
    values = list(keys)
    for stage in executed:
        for a, b in stage:
            values[a], values[b] = values[b], values[a]
    return values


def check_zero_one(net: ComparatorNetwork) -> bool:
    """
    Exhaustively check that net sorts all 2^m binary inputs.

    Raises:
        SortingNetworkError: If the width exceeds ZERO_ONE_LIMIT.
    """
    m = net.width
    if m > ZERO_ONE_LIMIT:
        raise SortingNetworkError(f"Zero-one check limited to m <= {ZERO_ONE_LIMIT}, got {m}")
    words = np.arange(1 << m, dtype=np.int64)
    data = ((words[:, None] >> np.arange(m)) & 1).astype(np.uint8)
    for stage in net.stages:
        for a, b in stage:
            low = np.minimum(data[:, a], data[:, b])
            high = np.maximum(data[:, a], data[:, b])
            data[:, a] = low
            data[:, b] = high
    return bool(np.all(data[:, :-1] <= data[:, 1:]))


def sort_on_path_schedule(destinations: Sequence[Any]) -> List[Stage]:
    """
    Swap stages that sort the keys on a path with the insertion network.

    Args:
        destinations: Distinct sortable labels, one per path position.

    Returns:
        List[Stage]: 2m - 3 stages of executed swaps (possibly empty); [] when m < 2.
    """
    if len(destinations) < 2:
        return []
    _, executed = run_network(insertion_network(len(destinations)), destinations)
    return executed
