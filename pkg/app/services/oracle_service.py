# app/services/oracle_service.py
"""Exact brute-force solvers for small instances.

The cycle-cover search below is shared with the constructive pipeline,
which runs it on small vertex subsets with a local budget.
"""
import logging
import time
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from app.models.result_schemas import OracleBudget, OracleResult, OracleStatus
from app.models.schemas import BipartiteGraph, Digraph, DirectedTwoFactor, Matching, MTwoFactor
from app.services.matching_view import MatchingView, Seq
from app.utils.errors import BudgetExceeded

logger = logging.getLogger(__name__)


class BudgetTracker:
    """Counts expanded search nodes and watches the clock"""

    CLOCK_EVERY = 1024

    def __init__(self, max_nodes: int, time_limit: Optional[float] = None):
        self.max_nodes = max_nodes
        self.time_limit = time_limit
        self.nodes = 0
        self.started = time.monotonic()

    @classmethod
    def of(cls, budget: OracleBudget) -> "BudgetTracker":
        return cls(budget.max_nodes_expanded, budget.time_limit)

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceeded(self.nodes, "node limit")
        if self.time_limit is not None and self.nodes % self.CLOCK_EVERY == 0 and self.elapsed > self.time_limit:
            raise BudgetExceeded(self.nodes, "time limit")

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


def search_cycle_cover(succ: Sequence[Set[int]], vertices: Iterable[int], min_cycles: int, max_cycles: int,
                       min_len: int, tracker: BudgetTracker) -> Optional[List[Seq]]:
    """Partition vertices into directed cycles (arcs from succ), min_cycles..max_cycles of them, each of length >= min_len.

    Returns the cycles, or None after full exhaustion. Raises BudgetExceeded.
    """
    min_len = max(min_len, 2)
    pool = set(vertices)
    pred: Dict[int, Set[int]] = {v: set() for v in pool}
    out: Dict[int, Set[int]] = {}
    for v in pool:
        out[v] = succ[v] & pool
        for w in out[v]:
            pred[w].add(v)

    def dead_end(remaining: Set[int], start: int, last: int) -> bool:
        heads = remaining | {start}
        tails = remaining | {last}
        return any(not (out[v] & heads) or not (pred[v] & tails) for v in remaining)

    def close(remaining: Set[int], done: List[Seq]) -> Optional[List[Seq]]:
        if not remaining:
            return list(done) if min_cycles <= len(done) <= max_cycles else None
        if len(done) >= max_cycles:
            return None
        if len(remaining) < max(1, min_cycles - len(done)) * min_len:
            return None
        start = min(remaining, key=lambda v: (len(out[v] & remaining), v))
        return extend([start], remaining - {start}, done)

    def extend(path: Seq, remaining: Set[int], done: List[Seq]) -> Optional[List[Seq]]:
        tracker.tick()
        start, last = path[0], path[-1]
        if len(path) >= min_len and start in out[last]:
            found = close(remaining, done + [list(path)])
            if found is not None:
                return found
        candidates = sorted(out[last] & remaining, key=lambda w: (len(out[w] & remaining), w))
        for w in candidates:
            rest = remaining - {w}
            if dead_end(rest, start, w):
                continue
            path.append(w)
            found = extend(path, rest, done)
            path.pop()
            if found is not None:
                return found
        return None

    return close(pool, [])


def _canonical_cycles(cycles: List[Seq]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(MatchingView.canonical_rotation(c) for c in cycles))


class OracleService:
    """Exhaustive ground-truth solvers with explicit budgets"""

    def _too_large(self, n: int, budget: OracleBudget) -> Optional[OracleResult]:
        if n > budget.max_vertices:
            logger.warning(f"Instance of order {n} exceeds the oracle limit of {budget.max_vertices} vertices")
            return OracleResult(status=OracleStatus.BUDGET)
        return None

    def oracle_directed_2factor(self, digraph: Digraph, k: int, min_len: int = 3,
                                budget: Optional[OracleBudget] = None) -> OracleResult:
        """Directed 2-factor with exactly k cycles of length >= min_len"""
        budget = budget or OracleBudget()
        oversize = self._too_large(digraph.n, budget)
        if oversize is not None:
            return oversize

        succ = [set(digraph.successors(v)) for v in range(digraph.n)]
        tracker = BudgetTracker.of(budget)
        try:
            cycles = search_cycle_cover(succ, range(digraph.n), k, k, min_len, tracker)
        except BudgetExceeded as e:
            logger.warning(f"Directed 2-factor oracle stopped: {e}")
            return OracleResult(status=OracleStatus.BUDGET, nodes_expanded=e.nodes_expanded, elapsed=tracker.elapsed)

        if cycles is None:
            return OracleResult(status=OracleStatus.INFEASIBLE, nodes_expanded=tracker.nodes, elapsed=tracker.elapsed)
        return OracleResult(
            status=OracleStatus.FEASIBLE,
            witness=DirectedTwoFactor(cycles=_canonical_cycles(cycles)),
            nodes_expanded=tracker.nodes,
            elapsed=tracker.elapsed,
        )

    def oracle_m_2factor(self, graph: BipartiteGraph, matching: Matching, k: int, min_len: int = 6,
                         budget: Optional[OracleBudget] = None) -> OracleResult:
        """M-2-factor with exactly k alternating cycles of length >= min_len"""
        budget = budget or OracleBudget()
        view = MatchingView(graph, matching)
        oversize = self._too_large(view.n, budget)
        if oversize is not None:
            return oversize

        tracker = BudgetTracker.of(budget)
        try:
            cycles = search_cycle_cover(view.succ, range(view.n), k, k, -(-min_len // 2), tracker)
        except BudgetExceeded as e:
            logger.warning(f"M-2-factor oracle stopped: {e}")
            return OracleResult(status=OracleStatus.BUDGET, nodes_expanded=e.nodes_expanded, elapsed=tracker.elapsed)

        if cycles is None:
            return OracleResult(status=OracleStatus.INFEASIBLE, nodes_expanded=tracker.nodes, elapsed=tracker.elapsed)
        m_factor = MTwoFactor(cycles=tuple(view.to_cycle(c) for c in _canonical_cycles(cycles)))
        return OracleResult(
            status=OracleStatus.FEASIBLE,
            m_witness=m_factor,
            nodes_expanded=tracker.nodes,
            elapsed=tracker.elapsed,
        )

    def oracle_disjoint_cycles(self, digraph: Digraph, k: int, min_len: int = 3,
                               budget: Optional[OracleBudget] = None) -> OracleResult:
        """k vertex-disjoint directed cycles of length >= min_len (not necessarily spanning)"""
        budget = budget or OracleBudget()
        oversize = self._too_large(digraph.n, budget)
        if oversize is not None:
            return oversize

        tracker = BudgetTracker.of(budget)
        try:
            cycles = self._disjoint_cycles(digraph, k, max(min_len, 2), tracker)
        except BudgetExceeded as e:
            logger.warning(f"Disjoint-cycles oracle stopped: {e}")
            return OracleResult(status=OracleStatus.BUDGET, nodes_expanded=e.nodes_expanded, elapsed=tracker.elapsed)

        status = OracleStatus.INFEASIBLE if cycles is None else OracleStatus.FEASIBLE
        return OracleResult(status=status, cycles=cycles, nodes_expanded=tracker.nodes, elapsed=tracker.elapsed)

    def _disjoint_cycles(self, digraph: Digraph, k: int, min_len: int,
                         tracker: BudgetTracker) -> Optional[List[Tuple[int, ...]]]:
        if k <= 0:
            return []
        network = nx.DiGraph()
        network.add_nodes_from(range(digraph.n))
        network.add_edges_from(digraph.arcs)

        # one representative cycle per vertex set
        by_set: Dict[FrozenSet[int], Tuple[int, ...]] = {}
        for cycle in nx.simple_cycles(network):
            tracker.tick()
            if len(cycle) >= min_len:
                by_set.setdefault(frozenset(cycle), MatchingView.canonical_rotation(cycle))

        through: Dict[int, List[FrozenSet[int]]] = {v: [] for v in range(digraph.n)}
        for vertex_set in sorted(by_set, key=lambda s: (len(s), sorted(s))):
            for v in vertex_set:
                through[v].append(vertex_set)

        memo: Dict[Tuple[FrozenSet[int], int], Optional[List[FrozenSet[int]]]] = {}

        def pick(allowed: FrozenSet[int], need: int) -> Optional[List[FrozenSet[int]]]:
            if need == 0:
                return []
            if len(allowed) < need * min_len:
                return None
            key = (allowed, need)
            if key in memo:
                return memo[key]
            tracker.tick()
            v = min(allowed)
            result = None
            for vertex_set in through[v]:
                if vertex_set <= allowed:
                    rest = pick(allowed - vertex_set, need - 1)
                    if rest is not None:
                        result = [vertex_set] + rest
                        break
            if result is None:
                result = pick(allowed - {v}, need)
            memo[key] = result
            return result

        chosen = pick(frozenset(range(digraph.n)), k)
        if chosen is None:
            return None
        return sorted(by_set[s] for s in chosen)


# Global instance
oracle_service = OracleService()
