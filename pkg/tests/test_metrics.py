import numpy as np
import pytest

from netform.metrics import (compute_metrics, discovery, freeman_index,
                             incremental_segregation, inter_group_proportion,
                             mean_degree)
from netform.model import NetworkState, Population

POP22 = Population.from_counts([2, 2], [[2], [2]])


def complete_net(n: int) -> NetworkState:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return NetworkState.from_edges(n, edges)


class TestInterGroupProportion:
    def test_intra_only_is_zero(self):
        net = NetworkState.from_edges(4, [(0, 1), (2, 3)])
        assert inter_group_proportion(net, POP22) == 0.0

    def test_complete_graph(self):
        assert inter_group_proportion(complete_net(4), POP22) == pytest.approx(2 / 3)

    def test_empty_graph_undefined(self):
        assert inter_group_proportion(NetworkState.empty(4), POP22) is None

    def test_by_type_partition(self):
        pop = Population(np.zeros(4, dtype=int), np.array([0, 0, 1, 1]))
        net = NetworkState.from_edges(4, [(0, 1), (1, 2)])
        assert inter_group_proportion(net, pop, partition="by_type") == pytest.approx(0.5)


class TestFreemanIndex:
    def test_intra_only_is_one(self):
        net = NetworkState.from_edges(4, [(0, 1), (2, 3)])
        value, collapsed = freeman_index(net, POP22)
        assert value == 1.0 and not collapsed

    def test_complete_graph_is_zero(self):
        value, collapsed = freeman_index(complete_net(4), POP22)
        assert value == pytest.approx(0.0)
        assert not collapsed

    def test_empty_graph_convention(self):
        value, collapsed = freeman_index(NetworkState.empty(4), POP22)
        assert value == 1.0 and collapsed

    def test_single_class_rejected(self):
        pop = Population(np.zeros(3, dtype=int), np.zeros(3, dtype=int))
        with pytest.raises(ValueError):
            freeman_index(NetworkState.empty(3), pop)

    def test_decreasing_in_crossing_proportion(self):
        pop = Population.from_counts([3, 3], [[3], [3]])
        intra = [(0, 1), (1, 2), (3, 4), (4, 5)]
        values = []
        for cross in ([], [(0, 3)], [(0, 3), (1, 4)]):
            net = NetworkState.from_edges(6, intra + cross)
            values.append(freeman_index(net, pop)[0])
        assert values[0] > values[1] > values[2]

    def test_zero_mean_over_random_graphs(self):
        rng = np.random.default_rng(31)
        pop = Population.from_counts([10, 10], [[10], [10]])
        samples = []
        for _ in range(1000):
            adj = np.triu(rng.random((20, 20)) < 0.25, 1)
            net = NetworkState(adj | adj.T, np.ones((20, 20), dtype=np.uint8))
            if net.link_count() == 0:
                continue
            samples.append(freeman_index(net, pop)[0])
        assert abs(np.mean(samples)) < 0.05


class TestIncrementalSegregation:
    def test_arithmetic(self):
        assert incremental_segregation(0.4, 0.1) == pytest.approx(0.75)

    def test_equal_proportions(self):
        assert incremental_segregation(0.3, 0.3) == 0.0

    def test_collapsed_baseline_undefined(self):
        assert incremental_segregation(0.0, 0.2) is None
        assert incremental_segregation(None, 0.2) is None


class TestMeanDegree:
    def test_empty_graph(self):
        assert mean_degree(NetworkState.empty(5)) == 0.0

    def test_complete_graph(self):
        assert mean_degree(complete_net(5)) == 1.0

    def test_star(self):
        net = NetworkState.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert mean_degree(net) == pytest.approx(0.5)


class TestDiscovery:
    def test_all_ignorant(self):
        assert discovery(NetworkState.empty(4)) == 0.25

    def test_complete_information(self):
        net = NetworkState(np.zeros((4, 4), dtype=bool), np.ones((4, 4), dtype=np.uint8))
        assert discovery(net) == 1.0

    def test_one_meeting(self):
        net = NetworkState.from_edges(4, [(0, 1)])
        assert discovery(net) == pytest.approx(6 / 16)


class TestComputeMetrics:
    def test_assembles_all_fields(self):
        record = compute_metrics(complete_net(4), POP22)
        assert record.p_inter == pytest.approx(2 / 3)
        assert record.freeman == pytest.approx(0.0)
        assert record.mean_degree == 1.0
        assert record.discovery == 1.0
        assert record.s_is_vs_rational is None

    def test_pure_and_repeatable(self):
        net = NetworkState.from_edges(4, [(0, 2), (1, 3)])
        assert compute_metrics(net, POP22) == compute_metrics(net, POP22)
