import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.routing.sorting_networks import (
    ComparatorNetwork,
    HostConstraint,
    bitonic_network,
    check_zero_one,
    comparator,
    insertion_network,
    replay_swaps,
    run_network,
    sort_on_path_schedule,
)
from src.utils.exceptions import SortingNetworkError


def test_comparator():
    assert comparator(3, 1) == (1, 3)
    assert comparator(1, 3) == (1, 3)
    assert comparator(2, 2) == (2, 2)


@pytest.mark.parametrize("m", range(2, 10))
def test_insertion_shape(m):
    net = insertion_network(m)
    assert net.depth == 2 * m - 3
    assert net.size == m * (m - 1) // 2
    assert net.is_host_local()
    assert net.is_stagewise_disjoint()


def test_insertion_diamond_for_three():
    assert insertion_network(3).stages == (((0, 1),), ((1, 2),), ((0, 1),))


@pytest.mark.parametrize("m", [2, 4, 8, 16])
def test_bitonic_shape(m):
    net = bitonic_network(m)
    k = m.bit_length() - 1
    assert net.depth == k * (k + 1) // 2
    assert net.is_host_local()
    assert net.is_stagewise_disjoint()


def test_insertion_sorts_every_permutation_of_five():
    net = insertion_network(5)
    for keys in itertools.permutations(range(5)):
        values, _ = run_network(net, keys)
        assert values == [0, 1, 2, 3, 4]


@pytest.mark.slow
def test_bitonic_sorts_every_permutation_of_eight():
    net = bitonic_network(8)
    for keys in itertools.permutations(range(8)):
        values, _ = run_network(net, keys)
        assert values == list(range(8))


@pytest.mark.parametrize("m", range(2, 13))
def test_insertion_zero_one(m):
    assert check_zero_one(insertion_network(m))


@pytest.mark.parametrize("m", [2, 4, 8])
def test_bitonic_zero_one(m):
    assert check_zero_one(bitonic_network(m))


def test_broken_network_fails_zero_one():
    broken = ComparatorNetwork(width=3, stages=(((0, 1),), ((1, 2),)), host=HostConstraint.PATH)
    assert not check_zero_one(broken)


def test_zero_one_limit():
    with pytest.raises(SortingNetworkError):
        check_zero_one(insertion_network(21))


def test_swaps_equal_inversions():
    _, executed = run_network(insertion_network(4), [3, 2, 1, 0])
    assert sum(len(stage) for stage in executed) == 6
    _, executed = run_network(insertion_network(4), [0, 1, 2, 3])
    assert all(stage == () for stage in executed)


def test_hypercube_locality_is_checked():
    net = ComparatorNetwork(width=4, stages=(((0, 3),),), host=HostConstraint.HYPERCUBE)
    assert not net.is_host_local()
    net = ComparatorNetwork(width=4, stages=(((0, 2),),), host=HostConstraint.PATH)
    assert not net.is_host_local()


def test_overlapping_stage_is_detected():
    net = ComparatorNetwork(width=3, stages=(((0, 1), (1, 2)),), host=HostConstraint.PATH)
    assert not net.is_stagewise_disjoint()


@given(st.lists(st.integers(min_value=-50, max_value=50), min_size=2, max_size=8).map(
    lambda xs: xs + [0] * (8 - len(xs))))
def test_insertion_and_bitonic_agree(keys):
    by_insertion, _ = run_network(insertion_network(8), keys)
    by_bitonic, _ = run_network(bitonic_network(8), keys)
    assert by_insertion == by_bitonic == sorted(keys)


@given(st.permutations(list(range(7))))
def test_replaying_recorded_swaps_sorts(keys):
    values, executed = run_network(insertion_network(7), keys)
    assert replay_swaps(keys, executed) == values == sorted(keys)


def test_path_schedule():
    executed = sort_on_path_schedule(["c", "a", "b"])
    assert len(executed) == 3
    assert replay_swaps(["c", "a", "b"], executed) == ["a", "b", "c"]
    assert sort_on_path_schedule([7]) == []


def test_errors():
    with pytest.raises(SortingNetworkError):
        insertion_network(1)
    with pytest.raises(SortingNetworkError):
        bitonic_network(6)
    with pytest.raises(SortingNetworkError):
        bitonic_network(1)
    with pytest.raises(SortingNetworkError, match="width"):
        run_network(insertion_network(3), [1, 2])


@pytest.mark.slow
@pytest.mark.parametrize("m", range(2, 65))
def test_insertion_depth_up_to_sixty_four(m):
    assert insertion_network(m).depth == 2 * m - 3


@pytest.mark.slow
@pytest.mark.parametrize("k", range(1, 7))
def test_bitonic_depth_up_to_sixty_four(k):
    assert bitonic_network(2 ** k).depth == k * (k + 1) // 2


@pytest.mark.slow
@pytest.mark.parametrize("m", range(2, 9))
def test_insertion_sorts_every_permutation(m):
    net = insertion_network(m)
    for keys in itertools.permutations(range(m)):
        values, executed = run_network(net, keys)
        assert values == list(range(m))
        assert replay_swaps(keys, executed) == list(range(m))


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 4])
def test_small_bitonic_sorts_every_permutation(m):
    net = bitonic_network(m)
    for keys in itertools.permutations(range(m)):
        assert run_network(net, keys)[0] == list(range(m))
