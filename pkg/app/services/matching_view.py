# app/services/matching_view.py
"""Contracted view of a balanced bipartite graph with a perfect matching.

Vertex i of the view is the matched pair (x_i, overline{x_i}). A non-matched
edge x_a y_b with y_b matched to x_c becomes the arc a -> c. Under this
reading an M-path of order 2l is a directed path on l view vertices, an
M-cycle of length 2l is a directed cycle on l view vertices, and the
alternating operations (insertion, merging, path growth) become their
directed counterparts. All internal engines work on view sequences and
convert back to tagged vertices only at their public boundary.
"""
import logging
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from app.models.schemas import (
    BipartiteGraph,
    Digraph,
    Matching,
    MCycle,
    MPath,
    Node,
    Side,
    x_node,
    y_node,
)
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

Seq = List[int]


class MatchingView:
    """Directed view of (G, M) obtained by contracting every matched edge"""

    def __init__(self, graph: BipartiteGraph, matching: Matching):
        if not graph.balanced:
            raise PreconditionError(f"host is not balanced ({graph.x_count} vs {graph.y_count})")
        if not matching.is_perfect(graph):
            raise PreconditionError("matching is not a perfect matching of the host graph")

        self.graph = graph
        self.matching = matching
        self.n = graph.x_count
        self.mate: List[int] = [matching.mate_of_x(x) for x in range(self.n)]
        self.owner: List[int] = [0] * self.n
        for x, y in enumerate(self.mate):
            self.owner[y] = x

        self.succ: List[Set[int]] = [set() for _ in range(self.n)]
        self.pred: List[Set[int]] = [set() for _ in range(self.n)]
        for x, y in graph.edges:
            if self.mate[x] == y:
                continue
            target = self.owner[y]
            self.succ[x].add(target)
            self.pred[target].add(x)

    @classmethod
    def of_digraph(cls, digraph: Digraph) -> "MatchingView":
        """View of the split graph of a digraph (identity matching)"""
        edges = {(v, v) for v in range(digraph.n)} | set(digraph.arcs)
        graph = BipartiteGraph(x_count=digraph.n, y_count=digraph.n, edges=frozenset(edges))
        return cls(graph, Matching.identity(digraph.n))

    @staticmethod
    def canonical_rotation(cycle: Sequence[int]) -> Tuple[int, ...]:
        """Rotate a directed cycle so that its smallest vertex comes first"""
        if not cycle:
            return tuple()
        start = min(range(len(cycle)), key=lambda i: cycle[i])
        return tuple(cycle[start:]) + tuple(cycle[:start])

    # Degrees of the host, read through the view
    def x_degree(self, v: int) -> int:
        return len(self.succ[v]) + 1

    def y_degree(self, v: int) -> int:
        return len(self.pred[v]) + 1

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.succ[u]

    def arc_count(self) -> int:
        return sum(len(s) for s in self.succ)

    def pair_degree_minimum(self) -> Optional[int]:
        """min d+(u) + d-(v) over ordered non-arcs u != v; None when there is none"""
        best: Optional[int] = None
        for u in range(self.n):
            out_u = len(self.succ[u])
            for v in range(self.n):
                if u == v or v in self.succ[u]:
                    continue
                value = out_u + len(self.pred[v])
                if best is None or value < best:
                    best = value
        return best

    # Conversions between view sequences and tagged vertices
    def nodes_of(self, v: int) -> Tuple[Node, Node]:
        """(y end, x end) of the matched pair behind view vertex v"""
        return y_node(self.mate[v]), x_node(v)

    def vertex_of(self, node: Node) -> int:
        if node.side == Side.X:
            return node.index
        return self.owner[node.index]

    def vertices_of(self, nodes: Iterable[Node]) -> Set[int]:
        """View vertices of a node set; the set must be closed under matching partners"""
        node_set = set(nodes)
        result: Set[int] = set()
        for node in node_set:
            v = self.vertex_of(node)
            y, x = self.nodes_of(v)
            if y not in node_set or x not in node_set:
                raise PreconditionError(f"vertex set is not closed under matching partners at {node}")
            result.add(v)
        return result

    def nodes_of_set(self, vertices: Iterable[int]) -> FrozenSet[Node]:
        out: Set[Node] = set()
        for v in vertices:
            out.update(self.nodes_of(v))
        return frozenset(out)

    def to_cycle(self, cycle: Sequence[int]) -> MCycle:
        """Directed view cycle -> M-cycle in canonical rotation"""
        nodes: List[Node] = []
        for v in self.canonical_rotation(cycle):
            nodes.extend(self.nodes_of(v))
        return MCycle(vertices=tuple(nodes))

    def to_path(self, path: Sequence[int]) -> MPath:
        nodes: List[Node] = []
        for v in path:
            nodes.extend(self.nodes_of(v))
        return MPath(vertices=tuple(nodes))

    def _pairs(self, nodes: Sequence[Node], offset: int, closed: bool) -> Optional[Seq]:
        """Read matched pairs starting at offset; None if the pairs are not matched edges"""
        count = len(nodes)
        sequence: Seq = []
        forward = None
        for j in range(offset, offset + count, 2):
            a, b = nodes[j % count], nodes[(j + 1) % count]
            if not closed and j + 1 >= count:
                return None
            if not self.matching.contains(a, b):
                return None
            pair_forward = a.side == Side.Y
            if forward is None:
                forward = pair_forward
            elif forward != pair_forward:
                return None
            sequence.append(self.vertex_of(a))
        return sequence if forward else sequence[::-1]

    def from_cycle(self, cycle: MCycle) -> Seq:
        """M-cycle -> directed view cycle (orientation follows the matching)"""
        for offset in (0, 1):
            sequence = self._pairs(cycle.vertices, offset, closed=True)
            if sequence is not None:
                return sequence
        raise PreconditionError("cycle does not alternate with respect to the matching")

    def from_path(self, path: MPath) -> Seq:
        """M-path -> directed view path; reversed when the path starts on the X side"""
        sequence = self._pairs(path.vertices, 0, closed=False)
        if sequence is None:
            raise PreconditionError("path does not start and end with matched edges")
        return sequence

    def is_cycle(self, cycle: Sequence[int]) -> bool:
        count = len(cycle)
        if count < 2 or len(set(cycle)) != count:
            return False
        return all(cycle[(i + 1) % count] in self.succ[cycle[i]] for i in range(count))

    def is_path(self, path: Sequence[int]) -> bool:
        if not path or len(set(path)) != len(path):
            return False
        return all(path[i + 1] in self.succ[path[i]] for i in range(len(path) - 1))

    # e_G({x, y}, S) for the ends x, y of a path, read through the view
    def end_edges(self, path: Sequence[int], vertices: Iterable[int]) -> int:
        first, last = path[0], path[-1]
        into_first = self.pred[first]
        out_of_last = self.succ[last]
        return sum((v in into_first) + (v in out_of_last) for v in vertices)
