"""Tests for the degree-condition evaluators and theorem applicability"""
import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from app.models.result_schemas import TheoremId
from app.models.schemas import BipartiteGraph, Digraph
from app.services.condition_service import condition_service
from app.services.generator_service import graph_from_networkx
from app.utils.errors import PreconditionError
from conftest import split

PROPERTY_SETTINGS = settings(
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


@st.composite
def digraphs(draw: st.DrawFn, min_n: int = 2, max_n: int = 7) -> Digraph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n=n, arcs=frozenset(draw(st.sets(st.sampled_from(pairs)))))


def gate(rows, theorem):
    return condition_service.theorem_gate(rows, theorem).hypotheses_met


class TestSigma2:
    def test_complete_graph_is_unbounded(self):
        report = condition_service.sigma2(graph_from_networkx(nx.complete_graph(4)))
        assert report.unbounded
        assert report.value is None
        assert report.satisfied

    def test_five_cycle(self):
        report = condition_service.sigma2(graph_from_networkx(nx.cycle_graph(5)))
        assert (report.value, report.threshold, report.satisfied) == (4, 5, False)

    def test_complete_bipartite_3_3(self):
        report = condition_service.sigma2(graph_from_networkx(nx.complete_bipartite_graph(3, 3)))
        assert (report.value, report.threshold, report.satisfied) == (6, 6, True)

    def test_disjoint_cycles_threshold(self):
        report = condition_service.sigma2_disjoint_cycles(graph_from_networkx(nx.complete_bipartite_graph(3, 3)), k=2)
        assert report.threshold == 7
        assert not report.satisfied


class TestWoodall:
    def test_complete_digraph(self):
        assert condition_service.woodall_value(Digraph.complete(3)).unbounded

    def test_sharpness_instance(self, sharp7):
        report = condition_service.woodall_value(sharp7)
        assert (report.value, report.threshold, report.satisfied) == (6, 7, False)
        u, v = report.witness
        assert u != v and not sharp7.has_arc(u, v)

    def test_directed_triangle(self, triangle):
        report = condition_service.woodall_value(triangle)
        assert (report.value, report.satisfied) == (2, False)

    def test_needs_two_vertices(self):
        with pytest.raises(PreconditionError):
            condition_service.pair_degree_value(Digraph(n=1), threshold=1)

    def test_arbitrary_threshold(self, complete6):
        assert condition_service.pair_degree_value(complete6, threshold=100).satisfied


class TestSigma11:
    def test_complete_bipartite(self, k33):
        graph, _ = k33
        assert condition_service.sigma11(graph).unbounded

    def test_split_sharpness_instance(self, sharp7):
        graph, _ = split(sharp7)
        report = condition_service.sigma11(graph)
        assert (report.value, report.threshold, report.satisfied) == (8, 9, False)

    def test_alternating_six_cycle(self, alternating_c6):
        report = condition_service.sigma11(alternating_c6[0])
        assert (report.value, report.threshold) == (4, 5)

    def test_rejects_unbalanced(self):
        with pytest.raises(PreconditionError):
            condition_service.sigma11(BipartiteGraph(x_count=1, y_count=2))

    @PROPERTY_SETTINGS
    @given(digraph=digraphs())
    def test_matches_woodall_through_the_split(self, digraph: Digraph) -> None:
        directed = condition_service.woodall_value(digraph)
        bipartite = condition_service.sigma11(split(digraph)[0])
        assert directed.unbounded == bipartite.unbounded
        if not directed.unbounded:
            assert directed.value == bipartite.value - 2
        assert directed.satisfied == bipartite.satisfied


class TestOtherReports:
    def test_lemma2_floor_on_eight_cycle(self, alternating_c8):
        report = condition_service.lemma2_degree_floor(alternating_c8[0])
        assert (report.value, report.threshold, report.satisfied) == (2, 4, False)

    def test_lemma2_floor_on_complete_bipartite(self):
        graph = BipartiteGraph(x_count=5, y_count=5, edges=frozenset((x, y) for x in range(5) for y in range(5)))
        assert condition_service.lemma2_degree_floor(graph).satisfied

    def test_min_out_degree(self, triangle):
        assert condition_service.min_out_degree(triangle, threshold=1).satisfied
        assert not condition_service.min_out_degree(Digraph(n=2, arcs=frozenset({(0, 1)})), threshold=1).satisfied


class TestApplicability:
    def test_order_15_complete_digraph(self):
        rows = condition_service.applicability(Digraph.complete(15), k=1)
        assert gate(rows, TheoremId.DIRECTED_K_CYCLES)
        assert gate(rows, TheoremId.WOODALL)

    def test_order_14_fails_the_order_bound_only(self):
        rows = condition_service.applicability(Digraph.complete(14), k=1)
        assert not gate(rows, TheoremId.DIRECTED_K_CYCLES)
        assert gate(rows, TheoremId.WOODALL)
        missing = condition_service.theorem_gate(rows, TheoremId.DIRECTED_K_CYCLES).missing
        assert missing == ["order 14 fails 12k+3 >= 15"]

    def test_order_27_two_cycles(self):
        assert gate(condition_service.applicability(Digraph.complete(27), k=2), TheoremId.DIRECTED_K_CYCLES)

    def test_degree_condition_failure_is_reported(self, sharp7):
        rows = condition_service.applicability(sharp7, k=1)
        woodall = condition_service.theorem_gate(rows, TheoremId.WOODALL)
        assert not woodall.hypotheses_met
        assert woodall.missing == ["woodall 6 < 7"]

    def test_bipartite_rows(self, k33):
        rows = condition_service.applicability(k33[0], k=1)
        assert gate(rows, TheoremId.LAS_VERGNAS)
        assert gate(rows, TheoremId.SHORT_CYCLE_PACKING)
        assert not gate(rows, TheoremId.ALTERNATING_K_CYCLES)

    def test_unbalanced_host_reports_every_matching_theorem(self):
        rows = condition_service.applicability(BipartiteGraph(x_count=1, y_count=2, edges=frozenset({(0, 1)})), k=1)
        assert {row.theorem for row in rows} == {
            TheoremId.WOODALL,
            TheoremId.DIRECTED_K_CYCLES,
            TheoremId.SHORT_CYCLE_PACKING,
            TheoremId.ALTERNATING_K_CYCLES,
            TheoremId.LAS_VERGNAS,
        }
        for row in rows:
            assert not row.hypotheses_met
            assert row.missing == ["host is not balanced (1 vs 2)"]

    def test_undirected_rows(self):
        rows = condition_service.applicability(graph_from_networkx(nx.complete_graph(8)), k=2)
        assert gate(rows, TheoremId.ORE)
        assert gate(rows, TheoremId.BRANDT_ET_AL)
        assert gate(rows, TheoremId.SIGMA2_DISJOINT_CYCLES)
        assert not gate(rows, TheoremId.DIRECTED_K_CYCLES)

    def test_undirected_order_below_4k(self):
        rows = condition_service.applicability(graph_from_networkx(nx.complete_graph(7)), k=2)
        assert not gate(rows, TheoremId.BRANDT_ET_AL)
        assert gate(rows, TheoremId.ORE)
