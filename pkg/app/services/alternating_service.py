# app/services/alternating_service.py
"""Alternating-structure toolkit.

Two layers live here. The sequence layer works on MatchingView vertex
sequences (directed cycles and paths of the contracted host) and is what
the packing and partition engines call in their inner loops. The typed
layer wraps it for callers holding MCycle / MPath objects.

Scans run in canonical vertex order and return the first witness; short
cycles come from networkx in its deterministic order.
"""
import logging
from typing import Iterable, Iterator, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from app.models.schemas import (
    BipartiteGraph,
    InsertionEdge,
    Matching,
    MCycle,
    MergeWitness,
    MPath,
    Node,
    Side,
    x_node,
    y_node,
)
from app.services.matching_view import MatchingView, Seq
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

SHORT_LENGTHS = (4, 6, 8)


class AlternatingService:
    """Insertion, merging, splitting and short-cycle search on M-paths and M-cycles"""

    # -- sequence layer -------------------------------------------------------

    def insertion_positions(self, view: MatchingView, host: Sequence[int], path: Sequence[int],
                            cyclic: bool) -> Iterator[int]:
        """Positions i such that host[i] -> path[0] and path[-1] -> host[i+1] are arcs"""
        into_first = view.pred[path[0]]
        out_of_last = view.succ[path[-1]]
        count = len(host)
        limit = count if cyclic else count - 1
        for i in range(limit):
            if host[i] in into_first and host[(i + 1) % count] in out_of_last:
                yield i

    def find_insertion(self, view: MatchingView, host: Sequence[int], path: Sequence[int],
                       cyclic: bool) -> Optional[int]:
        return next(self.insertion_positions(view, host, path, cyclic), None)

    def splice(self, host: Sequence[int], path: Sequence[int], position: int) -> Seq:
        return list(host[:position + 1]) + list(path) + list(host[position + 1:])

    def lemma1_sequence(self, view: MatchingView, cycle: Sequence[int], path: Sequence[int],
                        i: int) -> Optional[Seq]:
        """Cycle through path plus i consecutive cycle vertices: last -> c_j -> .. -> c_{j+i-1} -> first"""
        count = len(cycle)
        out_of_last = view.succ[path[-1]]
        into_first = view.pred[path[0]]
        for j in range(count):
            if cycle[j] in out_of_last and cycle[(j + i - 1) % count] in into_first:
                return list(path) + [cycle[(j + t) % count] for t in range(i)]
        return None

    def iter_short_cycles(self, view: MatchingView, allowed: Iterable[int],
                          length: int) -> Iterator[Tuple[int, ...]]:
        """Every directed cycle of exactly the given length inside allowed, smallest vertex first"""
        pool = set(allowed)
        network = nx.DiGraph()
        network.add_nodes_from(sorted(pool))
        network.add_edges_from((a, b) for a in sorted(pool) for b in sorted(view.succ[a] & pool))
        for cycle in nx.simple_cycles(network, length_bound=length):
            if len(cycle) == length:
                yield MatchingView.canonical_rotation(cycle)

    def grow_path(self, view: MatchingView, allowed: Set[int], seed: Sequence[int]) -> Seq:
        """Extend seed at either end inside allowed until neither end extends"""
        path = list(seed)
        used = set(path)
        while True:
            extended = False
            ahead = sorted((view.succ[path[-1]] & allowed) - used)
            if ahead:
                path.append(ahead[0])
                used.add(ahead[0])
                extended = True
            behind = sorted((view.pred[path[0]] & allowed) - used)
            if behind:
                path.insert(0, behind[0])
                used.add(behind[0])
                extended = True
            if not extended:
                return path

    def merge_positions(self, view: MatchingView, first: Sequence[int],
                        second: Sequence[int]) -> Optional[Tuple[int, int]]:
        """(i, j) with first[i] -> second[j+1] and second[j] -> first[i+1] both arcs"""
        len_first, len_second = len(first), len(second)
        position = {v: j for j, v in enumerate(second)}
        for i in range(len_first):
            a, a_next = first[i], first[(i + 1) % len_first]
            for target in sorted(view.succ[a]):
                j_next = position.get(target)
                if j_next is None:
                    continue
                j = (j_next - 1) % len_second
                if a_next in view.succ[second[j]]:
                    return i, j
        return None

    def merge_at(self, first: Sequence[int], second: Sequence[int], i: int, j: int) -> Seq:
        return list(first[:i + 1]) + list(second[j + 1:]) + list(second[:j + 1]) + list(first[i + 1:])

    def split_positions(self, view: MatchingView, cycle: Sequence[int], min_len: int) -> Optional[Tuple[Seq, Seq]]:
        """Split one cycle into two by a pair of chords, each part of length >= min_len"""
        count = len(cycle)
        for p in range(count):
            for size in range(min_len, count - min_len + 1):
                q = (p + size) % count
                if cycle[(p + 1) % count] in view.succ[cycle[q]] and cycle[(q + 1) % count] in view.succ[cycle[p]]:
                    part = [cycle[(p + 1 + t) % count] for t in range(size)]
                    rest = [cycle[(q + 1 + t) % count] for t in range(count - size)]
                    return part, rest
        return None

    def open_at(self, cycle: Sequence[int], i: int) -> Seq:
        """Hamilton path of a cycle obtained by deleting the arc cycle[i] -> cycle[i+1]"""
        return list(cycle[i + 1:]) + list(cycle[:i + 1])

    def six_cycle_through(self, view: MatchingView, a: int) -> Optional[Seq]:
        """Alternating 6-cycle through y = overline{x_a} built from the partner x = x_a.

        Walks x' y' in M with x y' an edge, then looks for x'' in N(y)
        whose partner y'' is adjacent to x', skipping x and x'.
        """
        into_y = view.pred[a]
        for b in sorted(view.succ[a]):
            closing = sorted((view.succ[b] & into_y) - {a, b})
            if closing:
                return [a, b, closing[0]]
        return None

    # -- typed layer ----------------------------------------------------------

    def _disjoint(self, first: Iterable[Node], second: Iterable[Node]) -> bool:
        return not (set(first) & set(second))

    def lemma1_cycle(self, graph: BipartiteGraph, matching: Matching, cycle: MCycle, path: MPath,
                     i: int) -> Optional[MCycle]:
        """M-cycle of length |P| + 2i through P and a segment of C, or None"""
        if not self._disjoint(cycle.vertices, path.vertices):
            raise PreconditionError("cycle and path share vertices")
        if not 1 <= i <= cycle.length // 2:
            raise PreconditionError(f"i must lie in 1..{cycle.length // 2}, got {i}")
        view = MatchingView(graph, matching)
        found = self.lemma1_sequence(view, view.from_cycle(cycle), view.from_path(path), i)
        return None if found is None else view.to_cycle(found)

    def lemma2_six_cycle(self, graph: BipartiteGraph, matching: Matching) -> Optional[MCycle]:
        """M-cycle x y' x' y'' x'' y x of length 6.

        Starts from a Y vertex of largest degree, which carries a 6-cycle
        whenever every X vertex has degree at least (n + 3) / 2. The other
        pairs are tried in degree order after that.
        """
        view = MatchingView(graph, matching)
        order = sorted(range(view.n), key=lambda v: (-view.y_degree(v), v))
        for rank, a in enumerate(order):
            found = self.six_cycle_through(view, a)
            if found is not None:
                if rank:
                    logger.debug(f"No 6-cycle through the top Y vertex; found one at degree rank {rank}")
                return view.to_cycle(found)
        return None

    def enumerate_short_m_cycles(self, graph: BipartiteGraph, matching: Matching,
                                 h_vertices: Optional[Iterable[Node]] = None,
                                 lengths: Iterable[int] = SHORT_LENGTHS) -> Iterator[MCycle]:
        """Stream every alternating cycle in G[H] whose length is listed, shortest first"""
        wanted = sorted(set(lengths))
        if any(length not in SHORT_LENGTHS for length in wanted):
            raise PreconditionError(f"lengths must be drawn from {SHORT_LENGTHS}, got {wanted}")
        view = MatchingView(graph, matching)
        allowed = set(range(view.n)) if h_vertices is None else view.vertices_of(h_vertices)
        for length in wanted:
            for cycle in self.iter_short_cycles(view, allowed, length // 2):
                yield view.to_cycle(cycle)

    def _insertion_edge(self, view: MatchingView, host: Sequence[int], path: Sequence[int],
                        position: int) -> InsertionEdge:
        count = len(host)
        c, c_next = host[position], host[(position + 1) % count]
        first, last = path[0], path[-1]
        return InsertionEdge(
            edge=(x_node(c), y_node(view.mate[c_next])),
            u_end=y_node(view.mate[first]),
            v_end=x_node(last),
        )

    def _host_sequence(self, view: MatchingView, host: Union[MCycle, MPath]) -> Tuple[Seq, bool]:
        if isinstance(host, MCycle):
            return view.from_cycle(host), True
        return view.from_path(host), False

    def find_insertion_edge(self, graph: BipartiteGraph, matching: Matching, host: Union[MCycle, MPath],
                            path: MPath) -> Optional[InsertionEdge]:
        """First non-M host edge uv with both ends joined to the ends of path"""
        if not self._disjoint(host.vertices, path.vertices):
            raise PreconditionError("host and path share vertices")
        view = MatchingView(graph, matching)
        host_seq, cyclic = self._host_sequence(view, host)
        path_seq = view.from_path(path)
        position = self.find_insertion(view, host_seq, path_seq, cyclic)
        if position is None:
            return None
        return self._insertion_edge(view, host_seq, path_seq, position)

    def _witness_position(self, view: MatchingView, host_seq: Sequence[int], path_seq: Sequence[int],
                          witness: InsertionEdge, cyclic: bool) -> int:
        u, v = witness.edge
        x_end, y_end = (u, v) if u.side == Side.X else (v, u)
        if x_end.side != Side.X or y_end.side != Side.Y:
            raise PreconditionError("insertion edge must join X to Y")
        c, c_next = x_end.index, view.owner[y_end.index]
        count = len(host_seq)
        limit = count if cyclic else count - 1
        for i in range(limit):
            if host_seq[i] == c and host_seq[(i + 1) % count] == c_next:
                if i in set(self.insertion_positions(view, host_seq, path_seq, cyclic)):
                    return i
                raise PreconditionError(f"ends of the path are not joined to {u} and {v}")
        raise PreconditionError(f"{u}{v} is not a non-matched edge of the host")

    def insert_path(self, graph: BipartiteGraph, matching: Matching, host: MCycle, path: MPath,
                    witness: InsertionEdge) -> MCycle:
        """Splice path into host at the insertion edge: one M-cycle on V(host) + V(path)"""
        view = MatchingView(graph, matching)
        host_seq = view.from_cycle(host)
        path_seq = view.from_path(path)
        position = self._witness_position(view, host_seq, path_seq, witness, cyclic=True)
        return view.to_cycle(self.splice(host_seq, path_seq, position))

    def insert_path_into_path(self, graph: BipartiteGraph, matching: Matching, host: MPath, path: MPath,
                              witness: InsertionEdge) -> MPath:
        """Splice path into a host path; the result keeps the host's ends"""
        view = MatchingView(graph, matching)
        host_seq = view.from_path(host)
        path_seq = view.from_path(path)
        position = self._witness_position(view, host_seq, path_seq, witness, cyclic=False)
        result = view.to_path(self.splice(host_seq, path_seq, position))
        if result.vertices[0] != host.vertices[0]:
            result = MPath(vertices=result.vertices[::-1])
        return result

    def find_merge_witness(self, graph: BipartiteGraph, matching: Matching, first: MCycle,
                           second: MCycle) -> Optional[MergeWitness]:
        if not self._disjoint(first.vertices, second.vertices):
            raise PreconditionError("cycles share vertices")
        view = MatchingView(graph, matching)
        c1, c2 = view.from_cycle(first), view.from_cycle(second)
        found = self.merge_positions(view, c1, c2)
        if found is None:
            return None
        i, j = found
        a, a_next = c1[i], c1[(i + 1) % len(c1)]
        b, b_next = c2[j], c2[(j + 1) % len(c2)]
        return MergeWitness(
            first_edge=(x_node(a), y_node(view.mate[a_next])),
            second_edge=(x_node(b), y_node(view.mate[b_next])),
            cross_edges=((x_node(a), y_node(view.mate[b_next])), (x_node(b), y_node(view.mate[a_next]))),
        )

    def merge_two_cycles(self, graph: BipartiteGraph, matching: Matching, first: MCycle,
                         second: MCycle) -> Optional[MCycle]:
        """Single M-cycle on V(C1) + V(C2) via a crossing pair of edges, or None"""
        if not self._disjoint(first.vertices, second.vertices):
            raise PreconditionError("cycles share vertices")
        view = MatchingView(graph, matching)
        c1, c2 = view.from_cycle(first), view.from_cycle(second)
        found = self.merge_positions(view, c1, c2)
        if found is None:
            return None
        return view.to_cycle(self.merge_at(c1, c2, *found))

    def grow_maximal_m_path(self, graph: BipartiteGraph, matching: Matching, h_vertices: Iterable[Node],
                            seed: MPath) -> MPath:
        """M-path containing seed that cannot be extended at either end inside G[H]"""
        view = MatchingView(graph, matching)
        allowed = view.vertices_of(h_vertices)
        seed_seq = view.from_path(seed)
        if not set(seed_seq) <= allowed:
            raise PreconditionError("seed leaves the allowed vertex set")
        return view.to_path(self.grow_path(view, allowed, seed_seq))


# Global instance
alternating_service = AlternatingService()
