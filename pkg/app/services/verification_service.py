# app/services/verification_service.py
"""Verification of candidate solutions and alternating structures.

Verifiers never raise on a bad candidate: every defect becomes a
Violation with a stable rule id so callers (and the command line) can
report all of them at once.
"""
import logging
from typing import Iterable, List, Sequence, Set

import numpy as np

from app.models.schemas import (
    BipartiteGraph,
    Digraph,
    DirectedTwoFactor,
    Matching,
    MCycle,
    MPath,
    MTwoFactor,
    Node,
    Side,
    x_node,
    y_node,
)
from app.models.result_schemas import VerificationReport, Violation
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)


class VerificationService:
    """Rule-by-rule checks of factors, M-paths and M-cycles against their host"""

    def degree_profile(self, digraph: Digraph) -> np.ndarray:
        """Per-vertex (out-degree, in-degree) table of shape (n, 2)"""
        matrix = digraph.adjacency_matrix()
        return np.stack([matrix.sum(axis=1), matrix.sum(axis=0)], axis=1).astype(int)

    def _count_rules(self, violations: List[Violation], k: int, lengths: Sequence[int], min_len: int) -> None:
        if len(lengths) != k:
            violations.append(Violation(rule="cycle-count", detail=f"expected {k} cycles, found {len(lengths)}"))
        for i, length in enumerate(lengths):
            if length < min_len:
                violations.append(
                    Violation(rule="cycle-length", detail=f"cycle {i} has length {length} < {min_len}")
                )

    def verify_directed_2factor(self, digraph: Digraph, factor: DirectedTwoFactor,
                                k: int, min_len: int) -> VerificationReport:
        """Check that factor partitions V(D) into exactly k directed cycles of length >= min_len"""
        violations: List[Violation] = []
        seen: Set[int] = set()

        for i, cycle in enumerate(factor.cycles):
            for v in cycle:
                if not 0 <= v < digraph.n:
                    violations.append(Violation(rule="vertex-range", detail=f"cycle {i} uses vertex {v}"))
                elif v in seen:
                    violations.append(Violation(rule="disjointness", detail=f"vertex {v} appears twice"))
                seen.add(v)
            for j, u in enumerate(cycle):
                w = cycle[(j + 1) % len(cycle)]
                if 0 <= u < digraph.n and 0 <= w < digraph.n and not digraph.has_arc(u, w):
                    violations.append(Violation(rule="arc-missing", detail=f"cycle {i} uses non-arc ({u},{w})"))

        missing = sorted(set(range(digraph.n)) - seen)
        if missing:
            violations.append(Violation(rule="spanning", detail=f"uncovered vertices {missing}"))

        self._count_rules(violations, k, factor.lengths, min_len)
        return VerificationReport.from_violations(violations)

    def _alternation_violations(self, graph: BipartiteGraph, matching: Matching, vertices: Sequence[Node],
                                closed: bool, label: str) -> List[Violation]:
        violations: List[Violation] = []
        count = len(vertices)
        last = count if closed else count - 1
        for j in range(last):
            a, b = vertices[j], vertices[(j + 1) % count]
            if not (graph.contains(a) and graph.contains(b)):
                violations.append(Violation(rule="vertex-range", detail=f"{label} uses {a}-{b} outside the host"))
            elif not graph.adjacent(a, b):
                violations.append(Violation(rule="edge-missing", detail=f"{label} uses non-edge {a}-{b}"))

        # every vertex must meet exactly one matched edge of the structure
        for j, v in enumerate(vertices):
            neighbours = []
            if closed or j > 0:
                neighbours.append(vertices[j - 1])
            if closed or j < count - 1:
                neighbours.append(vertices[(j + 1) % count])
            matched = sum(1 for w in neighbours if matching.contains(v, w))
            if matched != 1:
                violations.append(
                    Violation(rule="alternation", detail=f"{label}: vertex {v} meets {matched} matched edges")
                )
        return violations

    def check_m_path(self, graph: BipartiteGraph, matching: Matching, path: MPath) -> VerificationReport:
        """Host-dependent M-path invariants: edges present, first/last edges matched, alternation"""
        return VerificationReport.from_violations(
            self._alternation_violations(graph, matching, path.vertices, closed=False, label="path")
        )

    def check_m_cycle(self, graph: BipartiteGraph, matching: Matching, cycle: MCycle) -> VerificationReport:
        """Host-dependent M-cycle invariants: edges present and exactly |C|/2 matched edges"""
        violations = self._alternation_violations(graph, matching, cycle.vertices, closed=True, label="cycle")
        matched = sum(1 for a, b in cycle.edges() if matching.contains(a, b))
        if matched != cycle.length // 2:
            violations.append(
                Violation(rule="alternation", detail=f"cycle has {matched} matched edges, expected {cycle.length // 2}")
            )
        return VerificationReport.from_violations(violations)

    def require_perfect(self, graph: BipartiteGraph, matching: Matching) -> None:
        if not matching.is_perfect(graph):
            raise PreconditionError("matching is not a perfect matching of the host graph")

    def all_nodes(self, graph: BipartiteGraph) -> Iterable[Node]:
        for x in range(graph.x_count):
            yield x_node(x)
        for y in range(graph.y_count):
            yield y_node(y)

    def verify_m_2factor(self, graph: BipartiteGraph, matching: Matching, factor: MTwoFactor,
                         k: int, min_len: int) -> VerificationReport:
        """Check that factor is a spanning M-2-factor with exactly k cycles of length >= min_len"""
        self.require_perfect(graph, matching)
        violations: List[Violation] = []
        seen: Set[Node] = set()
        covered_matched = set()

        for i, cycle in enumerate(factor.cycles):
            for v in cycle.vertices:
                if v in seen:
                    violations.append(Violation(rule="disjointness", detail=f"vertex {v} appears twice"))
                seen.add(v)
            violations.extend(
                self._alternation_violations(graph, matching, cycle.vertices, closed=True, label=f"cycle {i}")
            )
            for a, b in cycle.edges():
                if matching.contains(a, b):
                    x, y = (a, b) if a.side == Side.X else (b, a)
                    covered_matched.add((x.index, y.index))

        missing = sorted(str(v) for v in set(self.all_nodes(graph)) - seen)
        if missing:
            violations.append(Violation(rule="spanning", detail=f"uncovered vertices {missing}"))

        uncovered = sorted(matching.edges - covered_matched)
        if uncovered:
            violations.append(
                Violation(rule="matching-coverage", detail=f"matched edges not on any cycle: {uncovered}")
            )

        self._count_rules(violations, k, factor.lengths, min_len)
        return VerificationReport.from_violations(violations)


# Global instance
verification_service = VerificationService()
