import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.routing.benes import (
    benes_route,
    column_bit_order,
    pipelined_column_routing,
    plan_columns,
    shift_layers,
)
from src.routing.schedule import Permutation, Phase, Schedule, verify_schedule
from src.topology.butterfly import build_butterfly
from src.utils.exceptions import BenesError


def column_target(g, cols):
    """Node permutation taking (w, c) to (cols[c][w], c)."""
    image = [0] * g.n
    for c in range(g.r):
        for w in range(g.rows):
            image[w * g.r + c] = cols[c][w] * g.r + c
    return Permutation(tuple(image))


def test_column_bit_order():
    assert column_bit_order(0, 3) == (0, 1, 2)
    assert column_bit_order(2, 3) == (2, 0, 1)


def test_identity_plan_never_flips():
    plan = benes_route(list(range(8)), (0, 1, 2))
    assert plan.levels == 6
    assert not any(any(level) for level in plan.flips)
    assert plan.realized() == tuple(range(8))


def test_slack_level_is_identity(rng):
    r = 4
    plan = benes_route(rng.permutation(2 ** r).tolist(), column_bit_order(1, r))
    assert not any(plan.flips[r - 1])
    assert plan.level_bits == (1, 2, 3, 0, 0, 3, 2, 1)


def test_single_bit_flip():
    # swap rows differing in bit position 0 (mask 100)
    target = [w ^ 0b100 for w in range(8)]
    plan = benes_route(target, (1, 2, 0))
    assert plan.realized() == tuple(target)
    flipped = [t for t in range(plan.levels) if any(plan.flips[t])]
    assert all(plan.level_bits[t] == 0 for t in flipped)


def test_trace_length():
    plan = benes_route([3, 1, 0, 2], (0, 1))
    trace = plan.trace(0)
    assert len(trace) == 2 * 2 + 1
    assert trace[0] == 0 and trace[-1] == 3
    assert len(plan.bit_matrix()) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.data())
def test_plans_realize_their_target(r, data):
    target = data.draw(st.permutations(list(range(2 ** r))))
    bit_order = data.draw(st.permutations(list(range(r))))
    plan = benes_route(target, bit_order)
    assert plan.realized() == tuple(target)
    assert plan.is_collision_free()


def test_bad_inputs():
    with pytest.raises(BenesError, match="Bit order"):
        benes_route(list(range(8)), (0, 0, 1))
    with pytest.raises(BenesError, match="Target"):
        benes_route([0, 0, 1, 2, 3, 4, 5, 6], (0, 1, 2))
    with pytest.raises(BenesError, match="Target"):
        benes_route(list(range(4)), (0, 1, 2))


def test_column_count_must_match(g3):
    with pytest.raises(BenesError):
        plan_columns(g3, [list(range(8))] * 2)
    with pytest.raises(BenesError):
        shift_layers(g3, plan_columns(g3, [list(range(8))] * 3)[:2])


def test_pipelined_identity(g3):
    cols = [list(range(8))] * 3
    layers = pipelined_column_routing(g3, cols)
    assert len(layers) == 6
    assert all(layer.phase == Phase.COLUMN_ROUTE for layer in layers)
    report = verify_schedule(g3, Schedule(r=3, layers=list(layers)), Permutation.identity(g3.n))
    assert report.passed
    assert report.max_occupancy == 2


@pytest.mark.parametrize("r", [3, 4, 5])
def test_pipelined_random_columns(r):
    g = build_butterfly(r)
    rng = np.random.default_rng(r)
    cols = [rng.permutation(g.rows).tolist() for _ in range(r)]
    layers = pipelined_column_routing(g, cols)
    assert len(layers) == 2 * r
    report = verify_schedule(g, Schedule(r=r, layers=list(layers)), column_target(g, cols))
    assert report.passed, [str(f) for f in report.failures]
    assert report.max_occupancy <= 2


def test_pipelined_cyclic_row_shift(g4):
    cols = [[(w + 1) % g4.rows for w in range(g4.rows)] for _ in range(4)]
    report = verify_schedule(g4, Schedule(r=4, layers=pipelined_column_routing(g4, cols)), column_target(g4, cols))
    assert report.passed


def test_every_node_sends_and_receives_once(g3, rng):
    cols = [rng.permutation(8).tolist() for _ in range(3)]
    for layer in pipelined_column_routing(g3, cols):
        sources = sorted(a for a, _ in layer.moves)
        targets = sorted(b for _, b in layer.moves)
        assert sources == list(range(g3.n))
        assert targets == list(range(g3.n))


@pytest.mark.slow
@pytest.mark.parametrize("column", range(3))
def test_every_row_permutation_at_r3(column):
    bit_order = column_bit_order(column, 3)
    for target in itertools.permutations(range(8)):
        plan = benes_route(target, bit_order)
        assert plan.realized() == target
        assert plan.is_collision_free()
        assert plan.levels == 6


@pytest.mark.slow
@pytest.mark.parametrize("r", [4, 5, 6])
def test_ten_thousand_random_row_permutations(r):
    rng = np.random.default_rng(1000 + r)
    for trial in range(10_000):
        target = tuple(rng.permutation(2 ** r).tolist())
        plan = benes_route(target, column_bit_order(trial % r, r))
        assert plan.realized() == target
        assert plan.is_collision_free()
