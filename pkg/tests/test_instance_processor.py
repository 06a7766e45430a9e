"""Tests for instance parsing, canonical serialization and DOT export"""
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from app.models.result_schemas import InstanceKind
from app.models.schemas import Digraph, Graph, MCycle, x_node, y_node
from app.services.instance_processor import instance_processor
from app.utils.errors import InstanceParseError
from conftest import split

PROPERTY_SETTINGS = settings(
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

TRIANGLE_TEXT = """\
# directed triangle
digraph 3
arc 0 1
arc 1 2   # closing arc below
arc 2 0
"""


@st.composite
def digraphs(draw: st.DrawFn) -> Digraph:
    n = draw(st.integers(min_value=1, max_value=8))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    return Digraph(n=n, arcs=frozenset(draw(st.sets(st.sampled_from(pairs))))) if pairs else Digraph(n=n)


def parse_error(text: str) -> InstanceParseError:
    with pytest.raises(InstanceParseError) as info:
        instance_processor.parse(text)
    return info.value


class TestParse:
    def test_digraph_with_comments(self, triangle):
        instance = instance_processor.parse(TRIANGLE_TEXT)
        assert instance.kind == InstanceKind.DIGRAPH
        assert instance.digraph == triangle

    def test_bipartite(self, alternating_c6):
        text = "bipartite 3\n" + "".join(f"edge {x} {y}\n" for x, y in sorted(alternating_c6[0].edges))
        text += "".join(f"match {v} {v}\n" for v in range(3))
        instance = instance_processor.parse(text)
        assert (instance.bipartite, instance.matching) == alternating_c6

    def test_graph_edges_are_unordered(self):
        instance = instance_processor.parse("graph 3\nedge 1 0\nedge 2 1\n")
        assert instance.graph == Graph(n=3, edges=frozenset({(0, 1), (1, 2)}))

    def test_missing_header(self):
        assert parse_error("# nothing here\n").line_number == 1

    def test_unknown_header(self):
        error = parse_error("\nmultigraph 3\n")
        assert error.line_number == 2

    def test_unknown_record(self):
        error = parse_error("digraph 3\narc 0 1\nedge 1 2\n")
        assert error.line_number == 3
        assert "unknown record" in str(error)

    def test_out_of_range(self):
        assert parse_error("digraph 3\narc 0 3\n").line_number == 2

    def test_self_loop(self):
        assert "self-loop" in str(parse_error("digraph 3\narc 1 1\n"))

    def test_non_integer(self):
        assert parse_error("digraph 3\narc 0 one\n").line_number == 2

    def test_wrong_arity(self):
        assert parse_error("digraph 3\narc 0 1 2\n").line_number == 2

    def test_duplicate_arc(self):
        error = parse_error("digraph 3\narc 0 1\narc 1 2\narc 0 1\n")
        assert error.line_number == 4
        assert "first on line 2" in str(error)

    def test_duplicate_undirected_edge(self):
        assert parse_error("graph 3\nedge 0 1\nedge 1 0\n").line_number == 3

    def test_matching_edge_absent(self):
        error = parse_error("bipartite 2\nedge 0 0\nedge 1 1\nmatch 0 0\nmatch 1 0\n")
        assert error.line_number == 5
        assert "matching edge absent" in str(error)

    def test_matching_edges_share_an_endpoint(self):
        error = parse_error("bipartite 2\nedge 0 0\nedge 1 0\nmatch 0 0\nmatch 1 0\n")
        assert error.line_number == 5


class TestSerialize:
    def test_canonical_text(self, triangle):
        assert instance_processor.serialize(instance_processor.of_digraph(triangle)) == \
            "digraph 3\narc 0 1\narc 1 2\narc 2 0\n"

    def test_bipartite_text(self, alternating_c6):
        text = instance_processor.serialize(instance_processor.of_bipartite(*alternating_c6))
        assert text.splitlines()[0] == "bipartite 3"
        assert text.splitlines()[-3:] == ["match 0 0", "match 1 1", "match 2 2"]

    @PROPERTY_SETTINGS
    @given(digraph=digraphs())
    def test_digraph_round_trip(self, digraph: Digraph) -> None:
        text = instance_processor.serialize(instance_processor.of_digraph(digraph))
        assert instance_processor.parse(text).digraph == digraph

    @PROPERTY_SETTINGS
    @given(digraph=digraphs())
    def test_bipartite_round_trip(self, digraph: Digraph) -> None:
        graph, matching = split(digraph)
        parsed = instance_processor.parse(instance_processor.serialize(instance_processor.of_bipartite(graph, matching)))
        assert (parsed.bipartite, parsed.matching) == (graph, matching)


class TestDot:
    def test_digraph_with_cycle(self, triangle):
        dot = instance_processor.to_dot(instance_processor.of_digraph(triangle), [(0, 1, 2)])
        assert dot.startswith("digraph G {")
        assert "  0 -> 1 [color=red, penwidth=2];" in dot
        assert "  1 [color=red];" in dot

    def test_graph_without_cycles(self):
        dot = instance_processor.to_dot(instance_processor.of_graph(Graph(n=2, edges=frozenset({(0, 1)}))))
        assert dot.startswith("graph G {")
        assert "  0 -- 1;" in dot

    def test_bipartite_matching_is_bold(self, alternating_c6):
        cycle = MCycle(vertices=(y_node(0), x_node(0), y_node(1), x_node(1), y_node(2), x_node(2)))
        dot = instance_processor.to_dot(instance_processor.of_bipartite(*alternating_c6), [cycle])
        assert "  x0 -- y0 [style=bold, color=red];" in dot
        assert "  x0 -- y1 [color=red];" in dot
        assert "cluster_x" in dot and "cluster_y" in dot
