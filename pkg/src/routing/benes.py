#!/usr/bin/env python3
"""
Benes switch settings for 2^r rows and their pipelined realization on the
cyclic butterfly.

A walk forward through the r columns and back again crosses 2r levels of
butterfly edges; each level lets an item keep its row or flip one bit. The
classical looping algorithm needs 2r - 1 such levels, so the last forward
level is left as identity and the middle Benes level runs on the first
backward step.

Every column runs its own plan at the same time, shifted by one column.
The plan of column c flips bits in the order c, c+1, ..., c+r-1 (mod r)
going forward and in the reverse order coming back.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from src.routing.schedule import Phase, ShiftLayer
from src.topology.butterfly import ButterflyGraph, bit_mask
from src.utils.exceptions import BenesError
from src.utils.logger import get_logger

logger = get_logger(__name__)

ColumnPermutationSet = Sequence[Sequence[int]]


@dataclass(frozen=True)
class BenesPlan:
    """
    Switch settings for one column.

    Attributes:
        r (int): Word width.
        target (Tuple[int, ...]): target[w] is the final row of the item starting at row w.
        bit_order (Tuple[int, ...]): Bit positions flipped by the forward levels.
        level_bits (Tuple[int, ...]): Bit position of each of the 2r levels.
        flips (Tuple[Tuple[bool, ...], ...]): flips[t][x] says whether the item at
            row x on entry to level t crosses to row x ^ mask(level_bits[t]).
    """
    r: int
    target: Tuple[int, ...]
    bit_order: Tuple[int, ...]
    level_bits: Tuple[int, ...]
    flips: Tuple[Tuple[bool, ...], ...]

    @property
    def width(self) -> int:
        return 1 << self.r

    @property
    def levels(self) -> int:
        return len(self.flips)

    def mask(self, level: int) -> int:
        return bit_mask(self.level_bits[level], self.r)

    def level_map(self, level: int) -> List[int]:
        """Row on exit of `level` for every row on entry."""
        mask = self.mask(level)
        return [x ^ mask if flip else x for x, flip in enumerate(self.flips[level])]

    def trace(self, row: int) -> List[int]:
        """Rows visited by the item starting at `row`, entry of level 0 through exit of the last level."""
        path = [row]
        for level in range(self.levels):
            row = row ^ self.mask(level) if self.flips[level][row] else row
            path.append(row)
        return path

    def realized(self) -> Tuple[int, ...]:
        """The permutation the plan actually implements."""
        return tuple(self.trace(w)[-1] for w in range(self.width))

    def is_collision_free(self) -> bool:
        return all(sorted(self.level_map(t)) == list(range(self.width)) for t in range(self.levels))

    def bit_matrix(self) -> List[List[int]]:
        return [[int(flip) for flip in level] for level in self.flips]


def column_bit_order(column: int, r: int) -> Tuple[int, ...]:
    """Forward bit order of a column: c, c+1, ..., c+r-1 (mod r)."""
    return tuple((column + k) % r for k in range(r))


def _loop(mapping: Dict[int, int], masks: Sequence[int]) -> List[Dict[int, bool]]:
    """
    Looping algorithm on one coset of rows.

    Returns 2 * len(masks) - 1 levels of {row on entry: flip}. The outer mask
    splits the coset into two halves; paired rows at the input (and at the
    output) are sent to opposite halves, which 2-colors every constraint cycle.
    """
    outer = masks[0]
    if len(masks) == 1:
        return [{x: mapping[x] != x for x in mapping}]

    inverse = {y: x for x, y in mapping.items()}
    color: Dict[int, int] = {}
    for start in sorted(mapping):
        if start in color:
            continue
        # the lower row of an input pair goes straight
        x = start
        c = 1 if x & outer else 0
        while True:
            color[x] = c
            partner = x ^ outer
            color[partner] = 1 - c
            x = inverse[mapping[partner] ^ outer]
            if x in color:
                break

    first: Dict[int, bool] = {}
    last: Dict[int, bool] = {}
    halves: Tuple[Dict[int, int], Dict[int, int]] = ({}, {})
    for x, y in mapping.items():
        c = color[x]
        entry = (x & ~outer) | (c * outer)
        exit_ = (y & ~outer) | (c * outer)
        first[x] = entry != x
        last[exit_] = exit_ != y
        halves[c][entry] = exit_

    inner = [_loop(half, masks[1:]) for half in halves]
    middle = [{**low, **high} for low, high in zip(*inner)]
    return [first, *middle, last]


def benes_route(target: Sequence[int], bit_order: Sequence[int]) -> BenesPlan:
    """
    Compute a collision-free plan realizing `target` on 2^r rows.

    Args:
        target: Permutation of [0, 2^r); target[w] is the destination row of row w.
        bit_order: Permutation of [0, r); forward level t flips bit bit_order[t].

    Returns:
        BenesPlan: 2r levels whose composition equals target.

    Raises:
        BenesError: If target is not a bijection, bit_order is not a permutation
            of [0, r), or their sizes disagree.
    """
    r = len(bit_order)
    width = 1 << r
    if r < 1 or sorted(bit_order) != list(range(r)):
        raise BenesError(f"Bit order must be a permutation of [0, {r}), got {list(bit_order)}")
    if len(target) != width or sorted(target) != list(range(width)):
        raise BenesError(f"Target must be a permutation of [0, {width})")

    masks = [bit_mask(p, r) for p in bit_order]
    benes = _loop({w: int(target[w]) for w in range(width)}, masks)
    identity = {w: False for w in range(width)}
    # Benes levels 0..r-2 | slack | middle and mirror levels
    levels = benes[: r - 1] + [identity] + benes[r - 1:]

    level_bits = tuple(bit_order) + tuple(reversed(bit_order))
    flips = tuple(tuple(level[w] for w in range(width)) for level in levels)
    return BenesPlan(r=r, target=tuple(int(t) for t in target), bit_order=tuple(bit_order),
                     level_bits=level_bits, flips=flips)


def _column_at(origin: int, step: int, r: int) -> int:
    """Column occupied at the start of `step` by items that started in `origin`."""
    if step < r:
        return (origin + step) % r
    return (origin - (step - r)) % r


def plan_columns(g: ButterflyGraph, cols: ColumnPermutationSet) -> List[BenesPlan]:
    """
    One BenesPlan per column, column c using column_bit_order(c, r).

    Raises:
        BenesError: If the number of columns or a permutation's width does not match g.
    """
    if len(cols) != g.r:
        raise BenesError(f"Expected {g.r} column permutations, got {len(cols)}")
    return [benes_route(cols[c], column_bit_order(c, g.r)) for c in range(g.r)]


def pipelined_column_routing(g: ButterflyGraph, cols: ColumnPermutationSet) -> List[ShiftLayer]:
    """
    Route every column's row permutation simultaneously in 2r shift layers.

    During the first r layers every qubit advances one column along a straight
    or cross edge; during the last r layers it walks back. The qubit starting
    at (w, c) ends at (cols[c][w], c).

    Args:
        g (ButterflyGraph): The butterfly.
        cols: For each of the r columns, a permutation of the 2^r rows.

    Returns:
        List[ShiftLayer]: Exactly 2r layers; in each, every node sends one qubit
        and receives one.

    Raises:
        BenesError: If the number of columns or a permutation's width does not match g.
    """
    return shift_layers(g, plan_columns(g, cols))


def shift_layers(g: ButterflyGraph, plans: Sequence[BenesPlan]) -> List[ShiftLayer]:
    """Emit the 2r shift layers that run every column's plan at once."""
    r = g.r
    if len(plans) != r or any(plan.r != r for plan in plans):
        raise BenesError(f"Need {r} plans of width 2^{r}")

    positions = [list(range(g.rows)) for _ in range(r)]
    layers: List[ShiftLayer] = []
    for step in range(2 * r):
        forward = step < r
        moves = []
        for origin, plan in enumerate(plans):
            column = _column_at(origin, step, r)
            next_column = (column + 1) % r if forward else (column - 1) % r
            mask = plan.mask(step)
            rows = positions[origin]
            for item, row in enumerate(rows):
                new_row = row ^ mask if plan.flips[step][row] else row
                moves.append((row * r + column, new_row * r + next_column))
                rows[item] = new_row
        layers.append(ShiftLayer(moves=tuple(sorted(moves)), phase=Phase.COLUMN_ROUTE))

    logger.debug("Pipelined column routing r=%d: %d shift layers", r, len(layers))
    return layers
