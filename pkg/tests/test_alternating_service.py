"""Tests for the alternating-structure toolkit"""
from typing import Iterable, Tuple

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from app.models.schemas import BipartiteGraph, Digraph, Matching, MCycle, MPath, x_node, y_node
from app.services.alternating_service import alternating_service
from app.services.matching_view import MatchingView
from app.services.verification_service import verification_service
from app.utils.errors import PreconditionError
from conftest import split

PROPERTY_SETTINGS = settings(
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

TRIANGLE = {(0, 1), (1, 2), (2, 0)}


def host(n: int, arcs: Iterable[Tuple[int, int]]) -> Tuple[BipartiteGraph, Matching]:
    return split(Digraph(n=n, arcs=frozenset(arcs)))


def m_cycle(*view: int) -> MCycle:
    """M-cycle y_a x_a y_b x_b ... of the split graph"""
    return MCycle(vertices=tuple(node for v in view for node in (y_node(v), x_node(v))))


def m_path(*view: int) -> MPath:
    return MPath(vertices=tuple(node for v in view for node in (y_node(v), x_node(v))))


def all_nodes(n: int):
    return [x_node(v) for v in range(n)] + [y_node(v) for v in range(n)]


class TestLemma1:
    def fully_joined(self) -> Tuple[BipartiteGraph, Matching]:
        return host(4, TRIANGLE | {(3, c) for c in range(3)} | {(c, 3) for c in range(3)})

    @pytest.mark.parametrize("i, length", [(1, 4), (2, 6), (3, 8)])
    def test_every_i_is_realised(self, i, length):
        graph, matching = self.fully_joined()
        cycle = alternating_service.lemma1_cycle(graph, matching, m_cycle(0, 1, 2), m_path(3), i)
        assert cycle is not None
        assert cycle.length == length
        assert {y_node(3), x_node(3)} <= cycle.vertex_set()
        assert verification_service.check_m_cycle(graph, matching, cycle).passed

    def test_no_edges_to_the_cycle(self):
        graph, matching = host(4, TRIANGLE)
        for i in (1, 2, 3):
            assert alternating_service.lemma1_cycle(graph, matching, m_cycle(0, 1, 2), m_path(3), i) is None

    def test_i_out_of_range(self):
        graph, matching = self.fully_joined()
        with pytest.raises(PreconditionError):
            alternating_service.lemma1_cycle(graph, matching, m_cycle(0, 1, 2), m_path(3), 4)

    def test_overlapping_path(self):
        graph, matching = self.fully_joined()
        with pytest.raises(PreconditionError):
            alternating_service.lemma1_cycle(graph, matching, m_cycle(0, 1, 2), m_path(0), 1)


@st.composite
def lemma1_fixtures(draw: st.DrawFn):
    """Cycle 0..l-1, path l..l+p-1 and random end edges; returns (graph, matching, l, p, end edge count)"""
    l = draw(st.integers(min_value=2, max_value=6))
    p = draw(st.integers(min_value=1, max_value=3))
    cycle_arcs = {(c, (c + 1) % l) for c in range(l)}
    path = list(range(l, l + p))
    path_arcs = {(path[t], path[t + 1]) for t in range(p - 1)}
    # more than l end edges in total
    out_of_last = draw(st.sets(st.integers(min_value=0, max_value=l - 1), min_size=1))
    into_first = draw(st.sets(st.integers(min_value=0, max_value=l - 1), min_size=l + 1 - len(out_of_last)))
    extra = {(path[-1], c) for c in out_of_last} | {(c, path[0]) for c in into_first}
    graph, matching = host(l + p, cycle_arcs | path_arcs | extra)
    return graph, matching, l, p, len(out_of_last) + len(into_first)


class TestLemma1Property:
    @PROPERTY_SETTINGS
    @given(fixture=lemma1_fixtures())
    def test_dense_ends_realise_every_i(self, fixture) -> None:
        graph, matching, l, p, end_edges = fixture
        assert end_edges > l
        cycle = m_cycle(*range(l))
        path = m_path(*range(l, l + p))
        for i in range(1, l + 1):
            found = alternating_service.lemma1_cycle(graph, matching, cycle, path, i)
            assert found is not None
            assert found.length == 2 * (p + i)
            assert path.vertex_set() <= found.vertex_set()
            assert verification_service.check_m_cycle(graph, matching, found).passed


@st.composite
def insertion_fixtures(draw: st.DrawFn):
    """Host cycle or path 0..l-1 and a path l..l+p-1 whose ends send enough edges into the host.

    A cycle host gets at least |C|/2 + 1 end edges, a path host at least |C|/2 + 2.
    """
    cyclic = draw(st.booleans())
    l = draw(st.integers(min_value=2, max_value=6))
    p = draw(st.integers(min_value=1, max_value=3))
    need = l + 1 if cyclic else l + 2
    host_arcs = {(c, (c + 1) % l) for c in range(l)} if cyclic else {(c, c + 1) for c in range(l - 1)}
    path = list(range(l, l + p))
    path_arcs = {(path[t], path[t + 1]) for t in range(p - 1)}
    out_of_last = draw(st.sets(st.integers(min_value=0, max_value=l - 1), min_size=max(0, need - l)))
    into_first = draw(st.sets(st.integers(min_value=0, max_value=l - 1), min_size=max(0, need - len(out_of_last))))
    extra = {(path[-1], c) for c in out_of_last} | {(c, path[0]) for c in into_first}
    graph, matching = host(l + p, host_arcs | path_arcs | extra)
    return graph, matching, cyclic, l, p


class TestInsertionThreshold:
    @PROPERTY_SETTINGS
    @given(fixture=insertion_fixtures())
    def test_enough_end_edges_give_an_insertion_edge(self, fixture) -> None:
        graph, matching, cyclic, l, p = fixture
        path = m_path(*range(l, l + p))
        target = m_cycle(*range(l)) if cyclic else m_path(*range(l))
        witness = alternating_service.find_insertion_edge(graph, matching, target, path)
        assert witness is not None
        if cyclic:
            grown = alternating_service.insert_path(graph, matching, target, path, witness)
            assert grown.length == 2 * (l + p)
            assert verification_service.check_m_cycle(graph, matching, grown).passed
        else:
            grown = alternating_service.insert_path_into_path(graph, matching, target, path, witness)
            assert grown.order == 2 * (l + p)
            assert grown.ends == target.ends
            assert verification_service.check_m_path(graph, matching, grown).passed


class TestLemma2:
    def test_complete_bipartite(self, k33):
        cycle = alternating_service.lemma2_six_cycle(*k33)
        assert cycle is not None and cycle.length == 6
        assert verification_service.check_m_cycle(*k33, cycle).passed

    def test_alternating_eight_cycle(self, alternating_c8):
        assert alternating_service.lemma2_six_cycle(*alternating_c8) is None

    def test_k44_minus_a_perfect_matching(self):
        graph = BipartiteGraph(
            x_count=4, y_count=4,
            edges=frozenset((x, y) for x in range(4) for y in range(4) if y != (x + 1) % 4),
        )
        matching = Matching.identity(4)
        cycle = alternating_service.lemma2_six_cycle(graph, matching)
        assert cycle is not None and cycle.length == 6
        assert verification_service.check_m_cycle(graph, matching, cycle).passed

    def test_starts_from_the_highest_degree_y_vertex(self):
        # vertex 5 receives three arcs, so y_5 has the largest degree
        graph, matching = host(6, TRIANGLE | {(3, 4), (4, 5), (5, 3), (0, 5), (1, 5)})
        cycle = alternating_service.lemma2_six_cycle(graph, matching)
        assert cycle.vertex_set() == m_cycle(3, 4, 5).vertex_set()
        assert verification_service.check_m_cycle(graph, matching, cycle).passed


class TestEnumerateShortCycles:
    def test_six_cycle_host(self, alternating_c6):
        assert len(list(alternating_service.enumerate_short_m_cycles(*alternating_c6, lengths={6}))) == 1

    def test_complete_bipartite_has_two_six_cycles(self, k33):
        cycles = list(alternating_service.enumerate_short_m_cycles(*k33, lengths={6}))
        assert len(cycles) == 2
        assert len({c.vertices for c in cycles}) == 2

    def test_complete_bipartite_four_cycles(self, k33):
        assert len(list(alternating_service.enumerate_short_m_cycles(*k33, lengths={4}))) == 3

    def test_matching_only(self):
        graph, matching = host(4, set())
        assert list(alternating_service.enumerate_short_m_cycles(graph, matching)) == []

    def test_restricted_to_h(self, two_alternating_c6):
        graph, matching = two_alternating_c6
        h = [x_node(v) for v in (3, 4, 5)] + [y_node(v) for v in (3, 4, 5)]
        cycles = list(alternating_service.enumerate_short_m_cycles(graph, matching, h_vertices=h))
        assert [c.vertex_set() for c in cycles] == [frozenset(h)]

    def test_h_must_be_closed_under_partners(self, alternating_c6):
        with pytest.raises(PreconditionError):
            list(alternating_service.enumerate_short_m_cycles(*alternating_c6, h_vertices=[x_node(0)]))

    def test_rejects_other_lengths(self, alternating_c6):
        with pytest.raises(PreconditionError):
            list(alternating_service.enumerate_short_m_cycles(*alternating_c6, lengths={10}))

    @pytest.mark.parametrize("length, count", [(2, 6), (3, 8), (4, 6)])
    def test_exact_lengths_in_a_complete_digraph(self, length, count):
        view = MatchingView.of_digraph(Digraph.complete(4))
        cycles = list(alternating_service.iter_short_cycles(view, range(4), length))
        assert len(cycles) == len(set(cycles)) == count
        assert all(len(c) == length and c[0] == min(c) for c in cycles)
        assert all(view.is_cycle(list(c)) for c in cycles)


class TestInsertion:
    def test_insertion_edge_into_cycle(self):
        graph, matching = host(4, TRIANGLE | {(0, 3), (1, 3), (3, 1), (3, 2)})
        witness = alternating_service.find_insertion_edge(graph, matching, m_cycle(0, 1, 2), m_path(3))
        assert witness is not None
        assert witness.edge == (x_node(0), y_node(1))
        assert (witness.u_end, witness.v_end) == (y_node(3), x_node(3))
        grown = alternating_service.insert_path(graph, matching, m_cycle(0, 1, 2), m_path(3), witness)
        assert grown.length == 8
        assert verification_service.check_m_cycle(graph, matching, grown).passed

    def test_no_edges_means_no_witness(self):
        graph, matching = host(4, TRIANGLE)
        assert alternating_service.find_insertion_edge(graph, matching, m_cycle(0, 1, 2), m_path(3)) is None

    def test_order_four_path_gives_ten_cycle(self):
        graph, matching = host(5, TRIANGLE | {(3, 4), (0, 3), (4, 1)})
        witness = alternating_service.find_insertion_edge(graph, matching, m_cycle(0, 1, 2), m_path(3, 4))
        grown = alternating_service.insert_path(graph, matching, m_cycle(0, 1, 2), m_path(3, 4), witness)
        assert grown.length == 10
        assert verification_service.check_m_cycle(graph, matching, grown).passed

    def test_invalid_witness(self):
        graph, matching = host(4, TRIANGLE | {(0, 3), (3, 1)})
        witness = alternating_service.find_insertion_edge(graph, matching, m_cycle(0, 1, 2), m_path(3))
        bad = witness.model_copy(update={"edge": (x_node(1), y_node(2))})
        with pytest.raises(PreconditionError):
            alternating_service.insert_path(graph, matching, m_cycle(0, 1, 2), m_path(3), bad)

    def test_path_host_keeps_its_ends(self):
        graph, matching = host(3, {(0, 1), (0, 2), (2, 1)})
        host_path = m_path(0, 1)
        witness = alternating_service.find_insertion_edge(graph, matching, host_path, m_path(2))
        assert witness.edge == (x_node(0), y_node(1))
        grown = alternating_service.insert_path_into_path(graph, matching, host_path, m_path(2), witness)
        assert grown.order == 6
        assert grown.ends == host_path.ends
        assert verification_service.check_m_path(graph, matching, grown).passed

    def test_order_six_host_path(self):
        graph, matching = host(4, {(0, 1), (1, 2), (1, 3), (3, 2)})
        witness = alternating_service.find_insertion_edge(graph, matching, m_path(0, 1, 2), m_path(3))
        grown = alternating_service.insert_path_into_path(graph, matching, m_path(0, 1, 2), m_path(3), witness)
        assert grown.order == 8
        assert verification_service.check_m_path(graph, matching, grown).passed

    def test_invalid_witness_on_path(self):
        graph, matching = host(3, {(0, 1), (0, 2), (2, 1)})
        witness = alternating_service.find_insertion_edge(graph, matching, m_path(0, 1), m_path(2))
        bad = witness.model_copy(update={"edge": (x_node(1), y_node(0))})
        with pytest.raises(PreconditionError):
            alternating_service.insert_path_into_path(graph, matching, m_path(0, 1), m_path(2), bad)


class TestMerge:
    def test_two_six_cycles_in_complete_host(self, complete6):
        graph, matching = split(complete6)
        merged = alternating_service.merge_two_cycles(graph, matching, m_cycle(0, 1, 2), m_cycle(3, 4, 5))
        assert merged is not None and merged.length == 12
        assert verification_service.check_m_cycle(graph, matching, merged).passed

    def test_witness_edges_exist(self, complete6):
        graph, matching = split(complete6)
        witness = alternating_service.find_merge_witness(graph, matching, m_cycle(0, 1, 2), m_cycle(3, 4, 5))
        assert witness is not None
        for a, b in witness.cross_edges:
            assert graph.adjacent(a, b)

    def test_no_cross_edges(self, two_alternating_c6):
        assert alternating_service.merge_two_cycles(*two_alternating_c6, m_cycle(0, 1, 2), m_cycle(3, 4, 5)) is None

    def test_single_cross_edge(self):
        graph, matching = host(6, TRIANGLE | {(3, 4), (4, 5), (5, 3), (0, 4)})
        assert alternating_service.merge_two_cycles(graph, matching, m_cycle(0, 1, 2), m_cycle(3, 4, 5)) is None

    def test_overlapping_cycles(self, complete6):
        with pytest.raises(PreconditionError):
            alternating_service.merge_two_cycles(*split(complete6), m_cycle(0, 1, 2), m_cycle(2, 3, 4))


class TestSplitPositions:
    def hexagon_with_chords(self) -> MatchingView:
        arcs = {(c, (c + 1) % 6) for c in range(6)} | {(3, 1), (0, 4)}
        return MatchingView.of_digraph(Digraph(n=6, arcs=frozenset(arcs)))

    def test_two_chords_split_the_cycle(self):
        view = self.hexagon_with_chords()
        parts = alternating_service.split_positions(view, list(range(6)), 3)
        assert parts == ([1, 2, 3], [4, 5, 0])
        assert all(view.is_cycle(part) for part in parts)

    def test_parts_respect_the_minimum_length(self):
        view = self.hexagon_with_chords()
        assert alternating_service.split_positions(view, list(range(6)), 4) is None

    def test_chordless_cycle(self):
        view = MatchingView.of_digraph(Digraph.directed_cycle(6))
        assert alternating_service.split_positions(view, list(range(6)), 3) is None


class TestGrowPath:
    def test_isolated_matched_edge(self):
        graph, matching = host(2, set())
        grown = alternating_service.grow_maximal_m_path(graph, matching, all_nodes(2), m_path(0))
        assert grown.order == 2

    def test_path_component(self):
        graph, matching = host(3, {(0, 1), (1, 2)})
        grown = alternating_service.grow_maximal_m_path(graph, matching, all_nodes(3), m_path(1))
        assert grown == m_path(0, 1, 2)

    def test_inside_six_cycle(self, alternating_c6):
        grown = alternating_service.grow_maximal_m_path(*alternating_c6, all_nodes(3), m_path(0))
        assert grown.order == 6
        assert verification_service.check_m_path(*alternating_c6, grown).passed

    def test_result_is_maximal(self, complete6):
        graph, matching = split(complete6)
        grown = alternating_service.grow_maximal_m_path(graph, matching, all_nodes(6), m_path(0))
        view = MatchingView(graph, matching)
        sequence = view.from_path(grown)
        assert len(sequence) == 6
        assert not (view.succ[sequence[-1]] - set(sequence))

    def test_seed_outside_h(self, alternating_c6):
        with pytest.raises(PreconditionError):
            alternating_service.grow_maximal_m_path(*alternating_c6, [x_node(1), y_node(1)], m_path(0))
