import json
import math

import numpy as np
import pytest

from src.routing.router import depth_bound, random_permutation, route_many, route_permutation
from src.routing.schedule import Permutation, Phase, ShiftLayer, SwapLayer, verify_schedule
from src.topology.butterfly import build_butterfly
from src.utils.common_functions import dumps_json
from src.utils.config import FLOW_FUNCTIONS
from src.utils.exceptions import RoutingError, TopologyError


def test_identity_routes_in_zero_layers(g3):
    result = route_permutation(g3, Permutation.identity(g3.n))
    assert result.schedule.depth == 0
    assert result.schedule.layers == []
    assert result.phase_depths == (0, 0, 0)
    assert result.depth_pre_elision == 12
    assert result.column_plans == []


@pytest.mark.parametrize("r, bound, log_bound", [(3, 12, 28), (4, 18, 36), (8, 42, 66)])
def test_depth_bound(r, bound, log_bound):
    assert depth_bound(r) == (bound, log_bound)


def test_depth_bound_needs_three():
    with pytest.raises(TopologyError):
        depth_bound(2)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_random_permutations_verify(r):
    g = build_butterfly(r)
    rng = np.random.default_rng(100 + r)
    for _ in range(5):
        pi = random_permutation(g.n, rng)
        result = route_permutation(g, pi)
        report = verify_schedule(g, result.schedule, pi)
        assert report.passed
        assert report.max_occupancy <= 2
        assert result.depth_post_elision <= 6 * r - 6


def test_phase_depths_stay_within_stage_counts(g4, rng):
    result = route_permutation(g4, random_permutation(g4.n, rng))
    assert result.phase_depths_pre_elision == (5, 8, 5)
    p1, p2, p3 = result.phase_depths
    assert p1 <= 5 and p3 <= 5
    assert p2 == 8
    assert sum(result.phase_depths) == result.schedule.depth
    kinds = [(layer.phase, type(layer)) for layer in result.schedule.layers]
    assert all(kind is SwapLayer for phase, kind in kinds if phase in (Phase.ROW_SORT, Phase.ROW_FINISH))
    assert all(kind is ShiftLayer for phase, kind in kinds if phase == Phase.COLUMN_ROUTE)
    assert [phase for phase, _ in kinds] == sorted(phase for phase, _ in kinds)


def test_routing_is_deterministic(g3, rng):
    pi = random_permutation(g3.n, rng)
    assert route_permutation(g3, pi).schedule == route_permutation(g3, pi).schedule


def test_moves_inside_rows_skip_column_routing(g3):
    # rotate every row by one column: no token changes row
    r = g3.r
    pi = Permutation(tuple((a // r) * r + (a % r + 1) % r for a in range(g3.n)))
    result = route_permutation(g3, pi)
    assert result.phase_depths[1] == 0
    assert result.column_plans == []
    assert verify_schedule(g3, result.schedule, pi).passed


def test_row_exchange_uses_column_routing(g3):
    r = g3.r
    pi = Permutation(tuple(((a // r) ^ 1) * r + a % r for a in range(g3.n)))
    result = route_permutation(g3, pi)
    assert result.phase_depths[1] == 2 * r
    assert verify_schedule(g3, result.schedule, pi).passed


def test_size_mismatch(g3):
    with pytest.raises(RoutingError, match="points"):
        route_permutation(g3, Permutation.identity(10))


def test_without_validation_still_correct(g3, rng):
    pi = random_permutation(g3.n, rng)
    result = route_permutation(g3, pi, validate=False)
    assert verify_schedule(g3, result.schedule, pi).passed


def test_alternative_flow_algorithm(g3, rng):
    pi = random_permutation(g3.n, rng)
    result = route_permutation(g3, pi, flow_func=FLOW_FUNCTIONS["dinitz"])
    assert verify_schedule(g3, result.schedule, pi).passed


def test_explain_is_json_ready(g3, rng):
    result = route_permutation(g3, random_permutation(g3.n, rng))
    data = json.loads(json.dumps(result.explain()))
    assert data["r"] == 3
    assert data["depth_pre_elision"] == 12
    assert len(data["colors"]) == g3.n
    assert set(data["phase_swaps"]) == {"1", "3"}
    assert len(data["phase_swaps"]["1"]) == 3
    assert set(data["benes"]) == {"0", "1", "2"}
    assert data["benes"]["1"]["bit_order"] == [1, 2, 0]
    assert len(data["benes"]["0"]["bits"]) == 6


def test_route_many_keeps_input_order(g3, rng):
    perms = [random_permutation(g3.n, rng) for _ in range(6)]
    sequential = route_many(g3, perms)
    concurrent = route_many(g3, perms, workers=3)
    assert [r.schedule for r in concurrent] == [r.schedule for r in sequential]
    for pi, result in zip(perms, concurrent):
        assert verify_schedule(g3, result.schedule, pi).passed


@pytest.mark.slow
@pytest.mark.parametrize("r", range(3, 9))
def test_hundred_permutations_per_dimension(r):
    g = build_butterfly(r)
    rng = np.random.default_rng(r)
    bound, log_bound = depth_bound(r)
    assert bound < 6 * math.log2(g.n) <= log_bound
    for _ in range(100):
        pi = random_permutation(g.n, rng)
        result = route_permutation(g, pi)
        assert result.depth_pre_elision == bound
        assert result.phase_depths_pre_elision == (2 * r - 3, 2 * r, 2 * r - 3)
        p1, p2, p3 = result.phase_depths
        assert p1 <= 2 * r - 3 and p3 <= 2 * r - 3
        assert p2 in (0, 2 * r)
        assert result.depth_post_elision <= bound
        report = verify_schedule(g, result.schedule, pi)
        assert report.passed
        assert report.max_occupancy <= 2


@pytest.mark.slow
def test_ten_thousand_permutations_at_r3(g3):
    rng = np.random.default_rng(10_000)
    for _ in range(10_000):
        pi = random_permutation(g3.n, rng)
        result = route_permutation(g3, pi, validate=False)
        assert verify_schedule(g3, result.schedule, pi).passed


@pytest.mark.slow
@pytest.mark.parametrize("r", range(3, 9))
def test_schedules_are_byte_identical_across_runs(r):
    g = build_butterfly(r)

    def run_once():
        rng = np.random.default_rng((7, r))
        return dumps_json([route_permutation(g, random_permutation(g.n, rng)).schedule.to_dict()
                           for _ in range(10)])

    assert run_once() == run_once()
