# app/services/condition_service.py
"""Degree-condition evaluators and the theorem applicability table"""
import logging
from typing import List, Optional, Tuple, Union

import numpy as np

from app.models.result_schemas import Applicability, ConditionReport, TheoremId
from app.models.schemas import BipartiteGraph, Digraph, Graph
from app.services.transform_service import transform_service
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

Instance = Union[Digraph, BipartiteGraph, Graph]

MATCHING_THEOREMS = (TheoremId.WOODALL, TheoremId.DIRECTED_K_CYCLES, TheoremId.SHORT_CYCLE_PACKING,
                     TheoremId.ALTERNATING_K_CYCLES, TheoremId.LAS_VERGNAS)


class ConditionService:
    """Degree-condition evaluators and the theorem applicability table"""

    def _masked_minimum(self, sums: np.ndarray, mask: np.ndarray) -> Tuple[Optional[int], Optional[Tuple[int, int]]]:
        """Minimum of sums over the masked cells and the first cell attaining it (row-major)"""
        if not mask.any():
            return None, None
        masked = np.where(mask, sums, np.iinfo(np.int64).max)
        u, v = np.unravel_index(int(np.argmin(masked)), masked.shape)
        return int(masked[u, v]), (int(u), int(v))

    def sigma2(self, graph: Graph) -> ConditionReport:
        """min d(u) + d(v) over distinct non-adjacent pairs, against threshold n"""
        adjacency = graph.adjacency_matrix()
        degrees = adjacency.sum(axis=1).astype(np.int64)
        sums = degrees[:, None] + degrees[None, :]
        mask = np.triu(~adjacency, k=1)
        value, witness = self._masked_minimum(sums, mask)
        return ConditionReport.of("sigma2", value, graph.n, witness)

    def pair_degree_value(self, digraph: Digraph, threshold: int, name: str = "pair_degree") -> ConditionReport:
        """min d+(u) + d-(v) over ordered non-arcs u != v, against an arbitrary threshold"""
        if digraph.n < 2:
            raise PreconditionError(f"pair degree needs n >= 2, got {digraph.n}")
        adjacency = digraph.adjacency_matrix()
        out_degrees = adjacency.sum(axis=1).astype(np.int64)
        in_degrees = adjacency.sum(axis=0).astype(np.int64)
        sums = out_degrees[:, None] + in_degrees[None, :]
        mask = ~adjacency
        np.fill_diagonal(mask, False)
        value, witness = self._masked_minimum(sums, mask)
        return ConditionReport.of(name, value, threshold, witness)

    def woodall_value(self, digraph: Digraph) -> ConditionReport:
        return self.pair_degree_value(digraph, digraph.n, name="woodall")

    def sigma11(self, graph: BipartiteGraph) -> ConditionReport:
        """min d(x) + d(y) over non-adjacent x in X, y in Y, against threshold n + 2"""
        if not graph.balanced:
            raise PreconditionError(f"sigma11 needs a balanced host ({graph.x_count} vs {graph.y_count})")
        biadjacency = graph.biadjacency()
        x_degrees = biadjacency.sum(axis=1).astype(np.int64)
        y_degrees = biadjacency.sum(axis=0).astype(np.int64)
        sums = x_degrees[:, None] + y_degrees[None, :]
        value, witness = self._masked_minimum(sums, ~biadjacency)
        return ConditionReport.of("sigma11", value, graph.x_count + 2, witness)

    def min_out_degree(self, digraph: Digraph, threshold: int) -> ConditionReport:
        if digraph.n == 0:
            return ConditionReport.of("min_out_degree", None, threshold)
        out_degrees = digraph.adjacency_matrix().sum(axis=1)
        return ConditionReport.of("min_out_degree", int(out_degrees.min()), threshold)

    def sigma2_disjoint_cycles(self, graph: Graph, k: int) -> ConditionReport:
        """sigma2 against 4k - 1 (k disjoint cycles in graphs of order at least 3k)"""
        report = self.sigma2(graph)
        return ConditionReport.of("sigma2_disjoint_cycles", report.value, 4 * k - 1, report.witness)

    def lemma2_degree_floor(self, graph: BipartiteGraph) -> ConditionReport:
        """min X-degree against ceil((n + 3) / 2), the floor that forces an alternating 6-cycle"""
        threshold = -(-(graph.x_count + 3) // 2)
        if graph.x_count == 0:
            return ConditionReport.of("x_degree_floor", None, threshold)
        x_degrees = graph.biadjacency().sum(axis=1)
        return ConditionReport.of("x_degree_floor", int(x_degrees.min()), threshold)

    def _describe(self, report: ConditionReport) -> str:
        return f"{report.name} {report.value} < {report.threshold}"

    def _order_missing(self, n: int, bound: int, label: str, strict: bool = False) -> List[str]:
        ok = n > bound if strict else n >= bound
        if ok:
            return []
        relation = ">" if strict else ">="
        return [f"order {n} fails {label} {relation} {bound}"]

    def _matching_theorems(self, n: int, k: int, condition: ConditionReport) -> List[Applicability]:
        """Theorems whose degree hypothesis is the Woodall condition or, equivalently, sigma11 >= n + 2"""
        degree_missing = [] if condition.satisfied else [self._describe(condition)]
        table = [
            (TheoremId.WOODALL, self._order_missing(n, 2, "n")),
            (TheoremId.DIRECTED_K_CYCLES, self._order_missing(n, 12 * k + 3, "12k+3")),
            (TheoremId.SHORT_CYCLE_PACKING, self._order_missing(n, 12 * k - 9, "12k-9")),
            (TheoremId.ALTERNATING_K_CYCLES, self._order_missing(2 * n, 6 * (k + 1), "6(k+1)", strict=True)),
            (TheoremId.LAS_VERGNAS, self._order_missing(n, 2, "n")),
        ]
        return [
            Applicability(theorem=theorem, hypotheses_met=not (degree_missing + order), missing=degree_missing + order)
            for theorem, order in table
        ]

    def applicability(self, instance: Instance, k: int) -> List[Applicability]:
        """Evaluate every theorem's order bound and degree condition against the instance"""
        if isinstance(instance, Digraph):
            if instance.n < 2:
                return [
                    Applicability(theorem=t, hypotheses_met=False, missing=[f"order {instance.n} < 2"])
                    for t in MATCHING_THEOREMS
                ]
            return self._matching_theorems(instance.n, k, self.woodall_value(instance))

        if isinstance(instance, BipartiteGraph):
            if not instance.balanced:
                reason = f"host is not balanced ({instance.x_count} vs {instance.y_count})"
                return [Applicability(theorem=t, hypotheses_met=False, missing=[reason]) for t in MATCHING_THEOREMS]
            return self._matching_theorems(instance.x_count, k, self.sigma11(instance))

        report = self.sigma2(instance)
        n = instance.n
        degree_missing = [] if report.satisfied else [self._describe(report)]
        disjoint = self.sigma2_disjoint_cycles(instance, k)
        disjoint_missing = [] if disjoint.satisfied else [self._describe(disjoint)]
        disjoint_missing += self._order_missing(n, 3 * k, "3k")
        rows = [
            Applicability(theorem=TheoremId.ORE, hypotheses_met=not degree_missing and n >= 3,
                          missing=degree_missing + self._order_missing(n, 3, "n")),
            Applicability(theorem=TheoremId.BRANDT_ET_AL,
                          hypotheses_met=not (degree_missing + self._order_missing(n, 4 * k, "4k")),
                          missing=degree_missing + self._order_missing(n, 4 * k, "4k")),
            Applicability(theorem=TheoremId.SIGMA2_DISJOINT_CYCLES, hypotheses_met=not disjoint_missing,
                          missing=disjoint_missing),
        ]
        if n >= 2:
            rows.extend(self._matching_theorems(n, k, self.woodall_value(transform_service.symmetrize(instance))))
        return rows

    def theorem_gate(self, rows: List[Applicability], theorem: TheoremId) -> Applicability:
        return next(row for row in rows if row.theorem == theorem)


# Global instance
condition_service = ConditionService()
