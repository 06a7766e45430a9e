# app/services/instance_processor.py
"""Line-oriented instance files and Graphviz export.

Grammar (one record per line, '#' starts a comment, indices 0-based):

    digraph <n>      then  arc <u> <v>
    bipartite <n>    then  edge <x> <y>  and  match <x> <y>
    graph <n>        then  edge <u> <v>
"""
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from app.models.result_schemas import InstanceFile, InstanceKind
from app.models.schemas import BipartiteGraph, Digraph, Graph, Matching, MCycle, Node, Side
from app.utils.errors import InstanceParseError

logger = logging.getLogger(__name__)

BODY_KEYWORDS = {
    InstanceKind.DIGRAPH: {"arc"},
    InstanceKind.BIPARTITE: {"edge", "match"},
    InstanceKind.GRAPH: {"edge"},
}

CYCLE_COLORS = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan4", "gold3", "gray40"]


class InstanceProcessor:
    """Parse and serialize instance files"""

    def _integers(self, line_number: int, tokens: Sequence[str], count: int) -> List[int]:
        if len(tokens) != count:
            raise InstanceParseError(line_number, f"expected {count} integer(s), got {len(tokens)}")
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise InstanceParseError(line_number, f"not an integer in {' '.join(tokens)!r}")
        if any(v < 0 for v in values):
            raise InstanceParseError(line_number, "indices must be non-negative")
        return values

    def parse(self, text: str) -> InstanceFile:
        """Parse instance text; every defect is reported with its line number"""
        kind: Optional[InstanceKind] = None
        n = 0
        pairs: Dict[str, List[Tuple[int, int]]] = {"arc": [], "edge": [], "match": []}
        lines: Dict[Tuple[str, int, int], int] = {}

        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            keyword, *tokens = line.split()

            if kind is None:
                try:
                    kind = InstanceKind(keyword)
                except ValueError:
                    raise InstanceParseError(line_number, f"expected a header (digraph|bipartite|graph), got {keyword!r}")
                (n,) = self._integers(line_number, tokens, 1)
                continue

            if keyword not in BODY_KEYWORDS[kind]:
                raise InstanceParseError(line_number, f"unknown record {keyword!r} in a {kind.value} file")
            u, v = self._integers(line_number, tokens, 2)
            if u >= n or v >= n:
                raise InstanceParseError(line_number, f"index out of range 0..{n - 1}")
            if keyword == "arc" and u == v:
                raise InstanceParseError(line_number, f"self-loop at {u}")
            if kind == InstanceKind.GRAPH and u == v:
                raise InstanceParseError(line_number, f"loop at {u}")
            key = (keyword, u, v) if kind != InstanceKind.GRAPH else (keyword, min(u, v), max(u, v))
            if key in lines:
                raise InstanceParseError(line_number, f"duplicate {keyword} (first on line {lines[key]})")
            lines[key] = line_number
            pairs[keyword].append((u, v))

        if kind is None:
            raise InstanceParseError(1, "missing header")

        if kind == InstanceKind.DIGRAPH:
            return InstanceFile(kind=kind, n=n, digraph=Digraph(n=n, arcs=frozenset(pairs["arc"])))
        if kind == InstanceKind.GRAPH:
            return InstanceFile(kind=kind, n=n, graph=Graph(n=n, edges=frozenset(pairs["edge"])))

        edges = set(pairs["edge"])
        seen_x: Set[int] = set()
        seen_y: Set[int] = set()
        for x, y in pairs["match"]:
            line_number = lines[("match", x, y)]
            if (x, y) not in edges:
                raise InstanceParseError(line_number, f"matching edge absent: edge {x} {y} is not declared")
            if x in seen_x or y in seen_y:
                raise InstanceParseError(line_number, "matching edges share an endpoint")
            seen_x.add(x)
            seen_y.add(y)
        return InstanceFile(
            kind=kind,
            n=n,
            bipartite=BipartiteGraph(x_count=n, y_count=n, edges=frozenset(edges)),
            matching=Matching(edges=frozenset(pairs["match"])),
        )

    def serialize(self, instance: InstanceFile) -> str:
        """Canonical text: header, then records in sorted order"""
        out = [f"{instance.kind.value} {instance.n}"]
        if instance.kind == InstanceKind.DIGRAPH:
            out.extend(f"arc {u} {v}" for u, v in sorted(instance.digraph.arcs))
        elif instance.kind == InstanceKind.GRAPH:
            out.extend(f"edge {u} {v}" for u, v in sorted(instance.graph.edges))
        else:
            out.extend(f"edge {x} {y}" for x, y in sorted(instance.bipartite.edges))
            out.extend(f"match {x} {y}" for x, y in sorted(instance.matching.edges))
        return "\n".join(out) + "\n"

    def of_digraph(self, digraph: Digraph) -> InstanceFile:
        return InstanceFile(kind=InstanceKind.DIGRAPH, n=digraph.n, digraph=digraph)

    def of_bipartite(self, graph: BipartiteGraph, matching: Matching) -> InstanceFile:
        return InstanceFile(kind=InstanceKind.BIPARTITE, n=graph.x_count, bipartite=graph, matching=matching)

    def of_graph(self, graph: Graph) -> InstanceFile:
        return InstanceFile(kind=InstanceKind.GRAPH, n=graph.n, graph=graph)

    # Graphviz ----------------------------------------------------------------

    def _color_of(self, cycles: Iterable[Sequence]) -> Dict[object, str]:
        colors: Dict[object, str] = {}
        for i, cycle in enumerate(cycles):
            for v in cycle:
                colors[v] = CYCLE_COLORS[i % len(CYCLE_COLORS)]
        return colors

    def to_dot(self, instance: InstanceFile, cycles: Optional[Sequence] = None) -> str:
        """DOT text; matched edges bold, cycle arcs/edges colored per cycle.

        cycles holds vertex sequences for digraphs and undirected graphs, MCycles for bipartite files.
        """
        cycles = list(cycles or [])
        if instance.kind == InstanceKind.BIPARTITE:
            return self._bipartite_dot(instance, cycles)

        directed = instance.kind == InstanceKind.DIGRAPH
        pairs = sorted(instance.digraph.arcs) if directed else sorted(instance.graph.edges)
        on_cycle: Dict[Tuple[int, int], str] = {}
        for i, cycle in enumerate(cycles):
            color = CYCLE_COLORS[i % len(CYCLE_COLORS)]
            for j, u in enumerate(cycle):
                w = cycle[(j + 1) % len(cycle)]
                on_cycle[(u, w) if directed else (min(u, w), max(u, w))] = color

        colors = self._color_of(cycles)
        connector = "->" if directed else "--"
        out = [f"{'digraph' if directed else 'graph'} G {{"]
        for v in range(instance.n):
            attrs = f' [color={colors[v]}]' if v in colors else ""
            out.append(f"  {v}{attrs};")
        for u, v in pairs:
            attrs = f" [color={on_cycle[(u, v)]}, penwidth=2]" if (u, v) in on_cycle else ""
            out.append(f"  {u} {connector} {v}{attrs};")
        out.append("}")
        return "\n".join(out) + "\n"

    def _bipartite_dot(self, instance: InstanceFile, cycles: List[MCycle]) -> str:
        on_cycle: Dict[Tuple[int, int], str] = {}
        for i, cycle in enumerate(cycles):
            color = CYCLE_COLORS[i % len(CYCLE_COLORS)]
            for a, b in cycle.edges():
                x, y = (a, b) if a.side == Side.X else (b, a)
                on_cycle[(x.index, y.index)] = color
        node_colors = self._color_of([c.vertices for c in cycles])

        out = ["graph G {", "  rankdir=LR;"]
        for side in (Side.X, Side.Y):
            members = []
            for i in range(instance.n):
                node = Node(side, i)
                attrs = f" [color={node_colors[node]}]" if node in node_colors else ""
                members.append(f"{node}{attrs};")
            out.append(f"  subgraph cluster_{side.value} {{ label=\"{side.value.upper()}\"; {' '.join(members)} }}")
        for x, y in sorted(instance.bipartite.edges):
            attrs = []
            if instance.matching.contains(Node(Side.X, x), Node(Side.Y, y)):
                attrs.append("style=bold")
            if (x, y) in on_cycle:
                attrs.append(f"color={on_cycle[(x, y)]}")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            out.append(f"  x{x} -- y{y}{suffix};")
        out.append("}")
        return "\n".join(out) + "\n"


# Global instance
instance_processor = InstanceProcessor()
