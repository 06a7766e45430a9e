"""Tests for the brute-force oracles"""
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from app.models.result_schemas import OracleBudget, OracleStatus
from app.models.schemas import Digraph
from app.services.oracle_service import BudgetTracker, oracle_service, search_cycle_cover
from app.services.verification_service import verification_service
from app.utils.errors import BudgetExceeded
from conftest import split

PROPERTY_SETTINGS = settings(
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


@st.composite
def digraphs(draw: st.DrawFn, max_n: int = 6) -> Digraph:
    n = draw(st.integers(min_value=2, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n=n, arcs=frozenset(draw(st.sets(st.sampled_from(pairs)))))


class TestDirectedOracle:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_sharpness_instance_has_no_2factor(self, sharp7, k):
        result = oracle_service.oracle_directed_2factor(sharp7, k, min_len=2)
        assert result.status == OracleStatus.INFEASIBLE
        assert result.witness is None

    def test_complete_digraph_splits_into_two_cycles(self, complete6):
        result = oracle_service.oracle_directed_2factor(complete6, 2)
        assert result.status == OracleStatus.FEASIBLE
        assert verification_service.verify_directed_2factor(complete6, result.witness, 2, 3).passed
        assert result.nodes_expanded > 0

    def test_directed_five_cycle(self):
        digraph = Digraph.directed_cycle(5)
        feasible = oracle_service.oracle_directed_2factor(digraph, 1)
        assert feasible.status == OracleStatus.FEASIBLE
        assert feasible.witness.cycles == ((0, 1, 2, 3, 4),)
        assert oracle_service.oracle_directed_2factor(digraph, 2).status == OracleStatus.INFEASIBLE

    def test_min_len_rules_out_short_cycles(self, two_triangles):
        assert oracle_service.oracle_directed_2factor(two_triangles, 2, 3).status == OracleStatus.FEASIBLE
        assert oracle_service.oracle_directed_2factor(two_triangles, 2, 4).status == OracleStatus.INFEASIBLE

    def test_node_budget(self):
        budget = OracleBudget(max_nodes_expanded=1)
        result = oracle_service.oracle_directed_2factor(Digraph.complete(10), 1, budget=budget)
        assert result.status == OracleStatus.BUDGET
        assert result.witness is None
        assert result.nodes_expanded == 2

    def test_oversize_instance(self, complete6):
        result = oracle_service.oracle_directed_2factor(complete6, 1, budget=OracleBudget(max_vertices=5))
        assert result.status == OracleStatus.BUDGET
        assert result.nodes_expanded == 0

    @PROPERTY_SETTINGS
    @given(digraph=digraphs(), k=st.integers(min_value=1, max_value=3))
    def test_witness_verifies(self, digraph: Digraph, k: int) -> None:
        result = oracle_service.oracle_directed_2factor(digraph, k, 2)
        assert result.status != OracleStatus.BUDGET
        if result.status == OracleStatus.FEASIBLE:
            assert verification_service.verify_directed_2factor(digraph, result.witness, k, 2).passed


class TestMOracle:
    def test_alternating_six_cycle(self, alternating_c6):
        feasible = oracle_service.oracle_m_2factor(*alternating_c6, 1)
        assert feasible.status == OracleStatus.FEASIBLE
        assert feasible.m_witness.lengths == [6]
        assert verification_service.verify_m_2factor(*alternating_c6, feasible.m_witness, 1, 6).passed
        assert oracle_service.oracle_m_2factor(*alternating_c6, 2).status == OracleStatus.INFEASIBLE

    def test_split_sharpness_instance(self, sharp7):
        result = oracle_service.oracle_m_2factor(*split(sharp7), 1, min_len=4)
        assert result.status == OracleStatus.INFEASIBLE

    @PROPERTY_SETTINGS
    @given(digraph=digraphs(max_n=5), k=st.integers(min_value=1, max_value=2))
    def test_agrees_with_directed_oracle(self, digraph: Digraph, k: int) -> None:
        directed = oracle_service.oracle_directed_2factor(digraph, k, 3)
        alternating = oracle_service.oracle_m_2factor(*split(digraph), k, 6)
        assert directed.status == alternating.status


class TestDisjointCycles:
    def test_two_triangles(self, two_triangles):
        result = oracle_service.oracle_disjoint_cycles(two_triangles, 2)
        assert result.status == OracleStatus.FEASIBLE
        assert result.cycles == [(0, 1, 2), (3, 4, 5)]
        assert oracle_service.oracle_disjoint_cycles(two_triangles, 3).status == OracleStatus.INFEASIBLE

    def test_cycles_need_not_span(self):
        digraph = Digraph(n=7, arcs=frozenset({(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 0)}))
        assert oracle_service.oracle_disjoint_cycles(digraph, 2).status == OracleStatus.FEASIBLE
        assert oracle_service.oracle_directed_2factor(digraph, 2).status == OracleStatus.INFEASIBLE

    def test_min_len(self, complete6):
        assert oracle_service.oracle_disjoint_cycles(complete6, 2, 4).status == OracleStatus.INFEASIBLE
        assert oracle_service.oracle_disjoint_cycles(complete6, 3, 2).status == OracleStatus.FEASIBLE

    @PROPERTY_SETTINGS
    @given(digraph=digraphs(), k=st.integers(min_value=1, max_value=3))
    def test_2factor_implies_disjoint_cycles(self, digraph: Digraph, k: int) -> None:
        if oracle_service.oracle_directed_2factor(digraph, k, 3).status == OracleStatus.FEASIBLE:
            result = oracle_service.oracle_disjoint_cycles(digraph, k, 3)
            assert result.status == OracleStatus.FEASIBLE
            assert len(result.cycles) == k
            used = [v for cycle in result.cycles for v in cycle]
            assert len(used) == len(set(used))


class TestSearchCycleCover:
    def test_cycle_count_window(self, complete6):
        succ = [set(complete6.successors(v)) for v in range(6)]
        cycles = search_cycle_cover(succ, range(6), 2, 2, 3, BudgetTracker(10_000))
        assert sorted(len(c) for c in cycles) == [3, 3]

    def test_subset(self, complete6):
        succ = [set(complete6.successors(v)) for v in range(6)]
        cycles = search_cycle_cover(succ, {1, 3, 5}, 1, 1, 3, BudgetTracker(10_000))
        assert sorted(cycles[0]) == [1, 3, 5]

    def test_budget_raises(self, complete6):
        succ = [set(complete6.successors(v)) for v in range(6)]
        with pytest.raises(BudgetExceeded):
            search_cycle_cover(succ, range(6), 2, 2, 3, BudgetTracker(1))
