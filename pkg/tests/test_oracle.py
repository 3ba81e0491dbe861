import itertools
import json

import numpy as np
import pytest

from netform.beliefs import BeliefTable
from netform.model import (CostStructure, NetworkState, Population,
                           is_pairwise_stable)
from netform.oracle import (CLAIMS, belief_thresholds, check_proposition,
                            check_subset_relation, enumerate_stable_states,
                            is_complete_info_stable, iter_graphs,
                            stability_profile)

BASE_COSTS = CostStructure(0.7, 0.2, 1.0)


class TestThresholds:
    def test_base_parameters(self):
        thr = belief_thresholds(BASE_COSTS)
        assert thr.meet_always == pytest.approx(0.9875, abs=1e-12)
        assert thr.empty_unstable == pytest.approx(0.375, abs=1e-12)
        assert thr.meet_always_valid and thr.empty_unstable_valid

    def test_boundary_cost_forces_meetings(self):
        # c_high exactly at the redundant-link benefit: threshold hits zero.
        thr = belief_thresholds(CostStructure(0.7, 0.2, 0.7 - 0.49))
        assert thr.meet_always == pytest.approx(0.0)
        assert not thr.meet_always_valid

    def test_refuse_component(self):
        thr = belief_thresholds(CostStructure(0.7, 0.2, 2.0), component_size=3)
        assert thr.refuse_component == pytest.approx((2 - 1.68) / 1.8)
        assert thr.refuse_component_valid

    def test_meet_threshold_dominates_empty_threshold(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            delta = float(rng.uniform(0.05, 0.95))
            c_low = float(rng.uniform(0.01, 1.0))
            costs = CostStructure(delta, c_low, c_low + float(rng.uniform(0.01, 2.0)))
            thr = belief_thresholds(costs)
            assert thr.meet_always > thr.empty_unstable

    def test_component_size_validation(self):
        with pytest.raises(ValueError):
            belief_thresholds(BASE_COSTS, component_size=0)


def one_type_pop(n: int) -> Population:
    return Population(np.zeros(n, dtype=int), np.zeros(n, dtype=int))


def uniform(n: int, groups: int, value: float) -> BeliefTable:
    return BeliefTable.uniform(n, groups, value)


class TestEnumeration:
    def test_two_agents_same_type(self):
        pop = one_type_pop(2)
        states = list(enumerate_stable_states(pop, BASE_COSTS, uniform(2, 1, 0.5)))
        acquainted = [(adj, mem) for adj, mem in states if mem[0, 1] == 1]
        assert len(acquainted) == 1
        assert acquainted[0][0][0, 1]  # the linked pair

    def test_two_agents_different_types(self):
        pop = Population(np.zeros(2, dtype=int), np.array([0, 1]))
        thr = belief_thresholds(BASE_COSTS).empty_unstable
        for pi, expect_ignorant in ((thr - 0.01, True), (thr + 0.01, False)):
            states = list(enumerate_stable_states(pop, BASE_COSTS, uniform(2, 1, pi)))
            shapes = {(bool(adj[0, 1]), int(mem[0, 1])) for adj, mem in states}
            assert (False, 1) in shapes  # unlinked-acquainted is always stable
            assert all(not linked for linked, _ in shapes)
            assert ((False, 0) in shapes) == expect_ignorant

    def test_three_agents_hand_derived_set(self):
        # One type, base costs, priors above the empty-network threshold:
        # the stable states are the triangle (fully acquainted) and each
        # 2-link path whose endpoints have never met.
        pop = one_type_pop(3)
        states = list(enumerate_stable_states(pop, BASE_COSTS, uniform(3, 1, 0.5)))
        assert len(states) == 4
        keyed = {(adj.tobytes(), mem.tobytes()) for adj, mem in states}
        triangle = NetworkState.from_edges(3, [(0, 1), (0, 2), (1, 2)])
        assert (triangle.adjacency.tobytes(), triangle.memory.tobytes()) in keyed
        for center in range(3):
            ends = [k for k in range(3) if k != center]
            path = NetworkState.from_edges(3, [(center, ends[0]), (center, ends[1])])
            assert (path.adjacency.tobytes(), path.memory.tobytes()) in keyed

    def test_rejects_oversized_population(self):
        pop = one_type_pop(9)
        with pytest.raises(ValueError):
            list(enumerate_stable_states(pop, BASE_COSTS, uniform(9, 1, 0.5)))

    def test_profile_matches_explicit_enumeration(self):
        # The per-pair factorisation must reproduce plain is_pairwise_stable
        # over every graph and every admissible memory matrix.
        rng = np.random.default_rng(23)
        for _ in range(10):
            n = 4
            pop = Population(rng.integers(0, 2, n), rng.integers(0, 2, n))
            c_low = float(rng.uniform(0.05, 0.7))
            costs = CostStructure(float(rng.uniform(0.3, 0.9)), c_low,
                                  c_low + float(rng.uniform(0.05, 1.2)))
            table = BeliefTable(rng.random((n, 2)), np.zeros(n))
            fast = {(adj.tobytes(), mem.tobytes())
                    for adj, mem in enumerate_stable_states(pop, costs, table)}
            slow = set()
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            for adj in iter_graphs(n):
                free = [p for p in pairs if not adj[p]]
                for bits in itertools.product((0, 1), repeat=len(free)):
                    mem = np.eye(n, dtype=np.uint8)
                    mem[adj] = 1
                    for (i, j), b in zip(free, bits):
                        mem[i, j] = mem[j, i] = b
                    net = NetworkState(adj.copy(), mem)
                    if is_pairwise_stable(net, pop, costs, table).stable:
                        slow.add((net.adjacency.tobytes(), net.memory.tobytes()))
            assert fast == slow

    def test_segregated_pairs_stable_under_pessimism(self):
        # Two groups of two, one shared type, cross-group pessimism: the two
        # intra-group links are stable, the complete graph is not reachable
        # as a stable state because cross pairs refuse while ignorant.
        pop = Population(np.array([0, 0, 1, 1]), np.zeros(4, dtype=int))
        costs = CostStructure(0.7, 0.2, 2.0)
        base = np.where(np.arange(2)[None, :] == pop.groups[:, None], 0.999, 0.05)
        table = BeliefTable(base.astype(float), np.zeros(4))
        target = NetworkState.from_edges(4, [(0, 1), (2, 3)])
        profile = stability_profile(target.adjacency, pop, costs, table)
        assert profile is not None
        assert all(0 in bits for pair, bits in profile.items()
                   if not target.adjacency[pair])
        complete = ~np.eye(4, dtype=bool)
        assert is_complete_info_stable(complete, pop, costs)  # one shared type
        stable_graphs = {adj.tobytes() for adj, _ in
                         ((a, stability_profile(a, pop, costs, table))
                          for a in iter_graphs(4)) if _ is not None}
        assert target.adjacency.tobytes() in stable_graphs


class TestPropositionChecks:
    @pytest.mark.parametrize("claim", CLAIMS)
    def test_all_claims_confirmed(self, claim):
        report = check_proposition(claim, trials=10, rng=np.random.default_rng(1))
        assert report.confirmed, report.counterexample

    def test_unknown_claim_rejected(self):
        with pytest.raises(ValueError):
            check_proposition("P9")

    def test_precondition_violation_names_inequality(self):
        params = {"costs": CostStructure(0.7, 0.5, 1.0)}  # c_low > delta - delta^2
        with pytest.raises(ValueError, match="c_low <= delta - delta\\^2"):
            check_proposition("P1", params=params, trials=1)

    def test_empty_network_instability_at_base_point(self):
        # Rational priors of 0.5 clear the 0.375 threshold, so the fully
        # ignorant empty network cannot be stable.
        pop = Population.from_counts([4, 4], [[2, 2], [2, 2]])
        report = is_pairwise_stable(NetworkState.empty(8), pop, BASE_COSTS,
                                    uniform(8, 2, 0.5))
        assert not report.stable and report.witness.kind == "add"

    def test_report_serialises_to_json(self):
        report = check_proposition("P2", trials=5, rng=np.random.default_rng(4))
        payload = json.loads(report.to_json())
        assert payload["claim"] == "P2"
        assert payload["verdict"] == "Confirmed"
        assert payload["seed"] == report.seed


class TestSubsetRelation:
    def test_certain_beliefs_make_sets_equal(self):
        pop = one_type_pop(3)
        report = check_subset_relation(pop, BASE_COSTS, uniform(3, 1, 1.0))
        assert report.confirmed
        assert "sets equal" in report.notes

    def test_two_type_population_inclusion(self):
        pop = Population(np.zeros(4, dtype=int), np.array([0, 0, 1, 1]))
        report = check_subset_relation(pop, BASE_COSTS, uniform(4, 1, 0.99))
        assert report.confirmed
        sizes = {note.split(" = ")[0]: int(note.split(" = ")[1])
                 for note in report.notes if " = " in note}
        assert sizes["|stable, complete info|"] <= sizes["|stable, incomplete info|"]

    def test_pessimistic_outsider_gives_strict_inclusion(self):
        pop = Population(np.array([0, 1, 1, 1]), np.zeros(4, dtype=int))
        costs = CostStructure(0.7, 0.2, 2.0)
        base = np.full((4, 2), 0.999)
        base[0, 1] = 0.05
        report = check_subset_relation(pop, costs, BeliefTable(base, np.zeros(4)))
        assert report.confirmed
        assert any("strictness witness" in note for note in report.notes)

    def test_rejects_oversized_population(self):
        pop = one_type_pop(6)
        with pytest.raises(ValueError):
            check_subset_relation(pop, BASE_COSTS, uniform(6, 1, 0.99))
