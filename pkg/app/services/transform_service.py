# app/services/transform_service.py
"""Correspondences between undirected graphs, digraphs and bipartite graphs
with a distinguished perfect matching, and translation of solutions."""
import logging
from typing import List, Optional, Set, Tuple

from app.models.schemas import (
    Arc,
    BipartiteGraph,
    CorrespondenceTag,
    Digraph,
    Direction,
    DirectedTwoFactor,
    Graph,
    Matching,
    MCycle,
    MTwoFactor,
    Node,
    Side,
    x_node,
    y_node,
)
from app.services.matching_view import MatchingView
from app.services.verification_service import verification_service
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)


class TransformService:
    """Graph, digraph and bipartite correspondences plus factor translation"""

    def symmetrize(self, graph: Graph) -> Digraph:
        """Replace every edge uv by the arcs (u, v) and (v, u)"""
        arcs = set()
        for u, v in graph.edges:
            arcs.add((u, v))
            arcs.add((v, u))
        return Digraph(n=graph.n, arcs=frozenset(arcs))

    def digraph_to_bipartite(self, digraph: Digraph) -> Tuple[BipartiteGraph, Matching, CorrespondenceTag]:
        """Split every vertex v into v_X v_Y; arcs (u, v) become edges u_X v_Y"""
        n = digraph.n
        edges = {(v, v) for v in range(n)} | set(digraph.arcs)
        graph = BipartiteGraph(x_count=n, y_count=n, edges=frozenset(edges))
        tag = CorrespondenceTag(direction=Direction.SPLIT, vertex_map=tuple((v, v) for v in range(n)))
        return graph, Matching.identity(n), tag

    def bipartite_to_digraph(self, graph: BipartiteGraph, matching: Matching) -> Tuple[Digraph, CorrespondenceTag]:
        """Contract every matched edge; vertex i of the result is the pair (x_i, overline{x_i})"""
        if not graph.balanced:
            raise PreconditionError(f"host is not balanced ({graph.x_count} vs {graph.y_count})")
        if not matching.is_perfect(graph):
            raise PreconditionError("matching is not a perfect matching of the host graph")

        n = graph.x_count
        owner = {y: x for x, y in matching.edges}
        arcs = {(x, owner[y]) for x, y in graph.edges if matching.mate_of_x(x) != y}
        tag = CorrespondenceTag(
            direction=Direction.CONTRACT,
            vertex_map=tuple((x, matching.mate_of_x(x)) for x in range(n)),
        )
        return Digraph(n=n, arcs=frozenset(arcs)), tag

    def _contract_cycle(self, cycle: MCycle, tag: CorrespondenceTag) -> Tuple[int, ...]:
        owner_of_x = {x: i for i, (x, _) in enumerate(tag.vertex_map)}
        owner_of_y = {y: i for i, (_, y) in enumerate(tag.vertex_map)}

        def owner(node: Node) -> int:
            return owner_of_x[node.index] if node.side == Side.X else owner_of_y[node.index]

        vertices = cycle.vertices
        count = len(vertices)
        start = 0 if owner(vertices[0]) == owner(vertices[1]) else 1
        sequence = [owner(vertices[j % count]) for j in range(start, start + count, 2)]
        # pairs read y -> x follow the arcs; pairs read x -> y run against them
        if vertices[start].side == Side.X:
            sequence.reverse()
        return MatchingView.canonical_rotation(sequence)

    def _host_of(self, factor: MTwoFactor, tag: CorrespondenceTag) -> Tuple[BipartiteGraph, Matching]:
        """Smallest host the factor can live in: the tag's matching plus the factor's own edges"""
        n = len(tag.vertex_map)
        edges: Set[Arc] = set(tag.vertex_map)
        for cycle in factor.cycles:
            for a, b in cycle.edges():
                x, y = (a, b) if a.side == Side.X else (b, a)
                if 0 <= x.index < n and 0 <= y.index < n:
                    edges.add((x.index, y.index))
        graph = BipartiteGraph(x_count=n, y_count=n, edges=frozenset(edges))
        return graph, Matching(edges=frozenset(tag.vertex_map))

    def translate_m2factor(self, factor: MTwoFactor, tag: CorrespondenceTag,
                           host: Optional[Tuple[BipartiteGraph, Matching]] = None) -> DirectedTwoFactor:
        """Alternating 2l-cycles -> directed l-cycles of the contracted digraph.

        The factor is always verified first, against host when it is passed
        and otherwise against the host rebuilt from the tag and the factor's
        own edges. The translated factor is checked again on the contracted
        digraph.
        """
        if tag.direction != Direction.CONTRACT:
            raise PreconditionError(f"translate_m2factor needs a contract correspondence, got {tag.direction.value}")
        graph, matching = host if host is not None else self._host_of(factor, tag)
        k = len(factor.cycles)
        report = verification_service.verify_m_2factor(graph, matching, factor, k=k, min_len=4)
        if not report.passed:
            raise PreconditionError(f"factor is not an M-2-factor: {report.rules()}")

        translated = DirectedTwoFactor(cycles=tuple(self._contract_cycle(c, tag) for c in factor.cycles))
        digraph, _ = self.bipartite_to_digraph(graph, matching)
        report = verification_service.verify_directed_2factor(digraph, translated, k=k, min_len=2)
        if not report.passed:
            raise PreconditionError(f"translated factor fails on the contracted digraph: {report.rules()}")
        logger.debug(f"Translated {k} alternating cycles to lengths {translated.lengths}")
        return translated

    def lift_directed_2factor(self, factor: DirectedTwoFactor, tag: CorrespondenceTag) -> MTwoFactor:
        """Directed l-cycles -> alternating 2l-cycles (inverse of translate_m2factor)"""
        cycles = []
        for cycle in factor.cycles:
            if len(cycle) < 2:
                raise PreconditionError(f"cycle {cycle} is shorter than a digon")
            nodes: List[Node] = []
            for v in MatchingView.canonical_rotation(cycle):
                x, y = tag.vertex_map[v]
                nodes.extend((y_node(y), x_node(x)))
            cycles.append(MCycle(vertices=tuple(nodes)))
        return MTwoFactor(cycles=tuple(cycles))


# Global instance
transform_service = TransformService()
