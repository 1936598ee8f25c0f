import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.routing.schedule import (
    GateLayer,
    GateOp,
    LayerKind,
    Permutation,
    Phase,
    Schedule,
    ShiftLayer,
    SwapLayer,
    apply_layer,
    execute_layer,
    identity_placement,
    layer_from_dict,
    verify_schedule,
)
from src.topology.butterfly import build_butterfly
from src.utils.exceptions import PermutationError, ScheduleError


def row_rotation(r, rows):
    """Shift layer that moves every token of the given rows one column forward."""
    return ShiftLayer(tuple((w * r + i, w * r + (i + 1) % r) for w in rows for i in range(r)))


class TestPermutation:
    def test_rejects_non_bijections(self):
        with pytest.raises(PermutationError):
            Permutation((0, 0, 1))
        with pytest.raises(PermutationError):
            Permutation((1, 2, 3))

    def test_permutation_error_is_a_value_error(self):
        with pytest.raises(ValueError):
            Permutation((5,))

    def test_basic_queries(self):
        p = Permutation((2, 0, 1))
        assert len(p) == 3
        assert p(0) == 2
        assert p.inverse().image == (1, 2, 0)
        assert p.support() == 3
        assert not p.is_identity()
        assert Permutation.identity(4).is_identity()

    def test_numpy_integers_are_normalized(self):
        p = Permutation(tuple(np.array([1, 0])))
        assert p.image == (1, 0)
        assert all(type(x) is int for x in p.image)

    def test_random_is_seeded(self):
        a = Permutation.random(24, np.random.default_rng(7))
        b = Permutation.random(24, np.random.default_rng(7))
        assert a == b
        assert sorted(a.image) == list(range(24))

    @pytest.mark.parametrize("image", [(0.0, 1.0), (0.7, 1.7), ("0", "1"), (True, False), (None, 1)])
    def test_rejects_non_integer_entries(self, image):
        with pytest.raises(PermutationError, match="integers"):
            Permutation(image)


class TestApplyLayer:
    def test_swap_exchanges_contents(self, g3):
        placement = identity_placement(g3.n)
        after = apply_layer(placement, SwapLayer(((0, 1), (3, 4))), g3)
        assert after[:6] == [1, 0, 2, 4, 3, 5]
        assert placement[0] == 0

    def test_shift_into_vacated_node(self, g3):
        placement = identity_placement(g3.n)
        placement[2] = None
        after = apply_layer(placement, ShiftLayer(((0, 1), (1, 2))), g3)
        assert after[:3] == [None, 0, 1]

    def test_gate_layer_keeps_placement(self, g3):
        placement = identity_placement(g3.n)
        layer = GateLayer((GateOp("CNOT", (0, 1)), GateOp("H", (5,))))
        assert apply_layer(placement, layer, g3) == placement

    def test_non_edge_swap(self, g3):
        with pytest.raises(ScheduleError, match="locality"):
            apply_layer(identity_placement(g3.n), SwapLayer(((0, 3),)), g3)

    def test_overlapping_swaps(self, g3):
        with pytest.raises(ScheduleError, match="structure"):
            apply_layer(identity_placement(g3.n), SwapLayer(((0, 1), (1, 2))), g3)

    def test_shift_onto_resident_that_stays(self, g3):
        with pytest.raises(ScheduleError, match="occupancy"):
            apply_layer(identity_placement(g3.n), ShiftLayer(((0, 1),)), g3)

    def test_shift_from_empty_node(self, g3):
        placement = identity_placement(g3.n)
        placement[0] = None
        placement[1] = None
        with pytest.raises(ScheduleError, match="empty node"):
            apply_layer(placement, ShiftLayer(((0, 1),)), g3)

    def test_two_tokens_into_one_node(self, g3):
        placement = identity_placement(g3.n)
        placement[1] = None
        # node 1 has forward in-edges from 0 (straight) and 12 (cross)
        with pytest.raises(ScheduleError, match="occupancy"):
            apply_layer(placement, ShiftLayer(((0, 1), (12, 1))), g3)

    def test_gate_on_non_edge(self, g3):
        with pytest.raises(ScheduleError, match="locality"):
            apply_layer(identity_placement(g3.n), GateLayer((GateOp("CNOT", (0, 4)),)), g3)

    def test_gate_with_three_nodes(self, g3):
        with pytest.raises(ScheduleError, match="structure"):
            apply_layer(identity_placement(g3.n), GateLayer((GateOp("CCX", (0, 1, 2)),)), g3)

    def test_shift_peak_occupancy(self, g3):
        _, peak = execute_layer(identity_placement(g3.n), row_rotation(3, [0]))
        assert peak == 2
        placement = identity_placement(g3.n)
        placement[1] = None
        _, peak = execute_layer(placement, ShiftLayer(((0, 1),)))
        assert peak == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=5), st.data())
def test_swap_layers_are_involutions(r, data):
    g = build_butterfly(r)
    rows = data.draw(st.lists(st.integers(0, g.rows - 1), unique=True))
    # straight edges (w,0)-(w,1) are pairwise disjoint across rows
    layer = SwapLayer(tuple((w * r, w * r + 1) for w in rows))
    start = identity_placement(g.n)
    once = apply_layer(start, layer, g)
    assert apply_layer(once, layer, g) == start


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=5), st.data())
def test_row_rotations_conserve_tokens(r, data):
    g = build_butterfly(r)
    rows = data.draw(st.lists(st.integers(0, g.rows - 1), unique=True))
    start = identity_placement(g.n)
    after = start
    for _ in range(r):
        after = apply_layer(after, row_rotation(r, rows), g)
    assert Counter(after) == Counter(start)
    assert after == start


class TestVerifySchedule:
    def test_empty_schedule_realizes_identity(self, g3):
        report = verify_schedule(g3, Schedule(r=3), Permutation.identity(g3.n))
        assert report.passed
        assert report.depth == 0

    def test_single_swap(self, g3):
        image = list(range(g3.n))
        image[0], image[1] = 1, 0
        schedule = Schedule(r=3, layers=[SwapLayer(((0, 1),))])
        report = verify_schedule(g3, schedule, Permutation(tuple(image)))
        assert report.passed
        assert report.depth == 1
        assert report.max_occupancy == 1

    def test_rotation_reports_ancilla_use(self, g3):
        image = list(range(g3.n))
        image[0:3] = [1, 2, 0]
        report = verify_schedule(g3, Schedule(r=3, layers=[row_rotation(3, [0])]), Permutation(tuple(image)))
        assert report.passed
        assert report.max_occupancy == 2

    def test_wrong_target(self, g3):
        schedule = Schedule(r=3, layers=[SwapLayer(((0, 1),))])
        report = verify_schedule(g3, schedule, Permutation.identity(g3.n))
        assert not report.passed
        assert report.checks_failed() == ["correctness"]

    def test_non_edge_is_located(self, g3):
        schedule = Schedule(r=3, layers=[SwapLayer(()), SwapLayer(((0, 3),))])
        report = verify_schedule(g3, schedule, Permutation.identity(g3.n))
        assert not report.passed
        assert report.failures[0].check == "locality"
        assert report.failures[0].layer_index == 1
        assert "layer 1" in str(report.failures[0])

    def test_dimension_mismatch(self, g3):
        report = verify_schedule(g3, Schedule(r=4), Permutation.identity(g3.n))
        assert report.checks_failed() == ["structure"]

    def test_target_size_mismatch(self, g3):
        report = verify_schedule(g3, Schedule(r=3), Permutation.identity(5))
        assert report.checks_failed() == ["structure"]

    def test_single_qubit_gate_outside_the_graph(self, g3):
        schedule = Schedule(r=3, layers=[GateLayer((GateOp("H", (999,)),))])
        report = verify_schedule(g3, schedule, Permutation.identity(g3.n))
        assert report.checks_failed() == ["locality"]
        assert report.failures[0].layer_index == 0

    def test_negative_gate_node(self, g3):
        with pytest.raises(ScheduleError, match="outside the graph"):
            apply_layer(identity_placement(g3.n), GateLayer((GateOp("CNOT", (-1, 0)),)), g3)

    def test_report_serializes(self, g3):
        schedule = Schedule(r=3, layers=[SwapLayer(((0, 3),))])
        data = verify_schedule(g3, schedule, Permutation.identity(g3.n)).to_dict()
        assert data["passed"] is False
        assert data["failures"][0]["layer"] == 0
        json.dumps(data)


class TestScheduleDocument:
    def test_json_round_trip(self):
        schedule = Schedule(r=3, layers=[
            SwapLayer(((0, 1),), phase=Phase.ROW_SORT),
            ShiftLayer(((3, 4), (4, 5), (5, 3))),
            GateLayer((GateOp("CNOT", (0, 1), timestep=2),)),
            SwapLayer((), phase=Phase.ROW_FINISH),
        ])
        restored = Schedule.from_dict(json.loads(json.dumps(schedule.to_dict())))
        assert restored == schedule
        assert restored.depth == 3
        assert restored.phase_depth(Phase.COLUMN_ROUTE) == 1
        assert restored.phase_depth(Phase.ROW_FINISH) == 0

    def test_layer_kinds(self):
        assert SwapLayer(()).kind is LayerKind.SWAP
        assert ShiftLayer(()).kind is LayerKind.SHIFT
        assert GateLayer(()).kind is LayerKind.GATE

    def test_unknown_kind(self):
        with pytest.raises(ScheduleError, match="Unknown layer kind"):
            layer_from_dict({"kind": "teleport", "moves": []})

    def test_bad_move_arity(self):
        with pytest.raises(ScheduleError):
            layer_from_dict({"kind": "swap", "moves": [[0, 1, 2]]})

    def test_missing_layers(self):
        with pytest.raises(ScheduleError, match="Malformed"):
            Schedule.from_dict({"r": 3})

    @pytest.mark.parametrize("layer", [[0, 1], "swap", 7, None])
    def test_layer_must_be_an_object(self, layer):
        with pytest.raises(ScheduleError, match="must be an object"):
            Schedule.from_dict({"r": 3, "layers": [layer]})

    @pytest.mark.parametrize("layer", [
        {"kind": "swap", "moves": [[0.5, 1]]},
        {"kind": "shift", "moves": [["a", "b"]]},
        {"kind": "swap", "moves": [7]},
        {"kind": "gate", "gates": [{"gate": "H"}]},
        {"kind": "gate", "gates": [[0, 1]]},
        {"kind": "swap", "phase": "one", "moves": []},
    ])
    def test_malformed_layer_entries(self, layer):
        with pytest.raises(ScheduleError, match="Malformed"):
            layer_from_dict(layer)

    def test_fractional_dimension(self):
        with pytest.raises(ScheduleError, match="Malformed"):
            Schedule.from_dict({"r": 3.5, "layers": []})
