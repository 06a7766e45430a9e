# app/services/partition_service.py
"""Alternating 2-factors with exactly k cycles, and the top-level solvers.

Everything below runs on the contracted view (see matching_view.py): an
M-2-factor with k cycles of length >= 6 is a directed 2-factor of the view
with k cycles of length >= 3. Constructive stages mutate plain lists of
view sequences; the public operations convert at their boundary and
re-verify what they return.
"""
import logging
from itertools import combinations, permutations
from typing import Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from app.models.result_schemas import (
    Applicability,
    CrossingOutcome,
    CrossingVariant,
    PackStatus,
    SolveOutcome,
    SolveStage,
    SolveStatus,
    TheoremId,
)
from app.models.schemas import (
    BipartiteGraph,
    Digraph,
    DirectedTwoFactor,
    Graph,
    Matching,
    MCycle,
    MPath,
    MTwoFactor,
)
from app.services.alternating_service import alternating_service
from app.services.condition_service import condition_service
from app.services.matching_view import MatchingView, Seq
from app.services.oracle_service import BudgetTracker, search_cycle_cover
from app.services.packing_service import packing_service
from app.services.transform_service import transform_service
from app.services.verification_service import verification_service
from app.utils.config import settings
from app.utils.errors import BudgetExceeded, PreconditionError, SearchInconclusive

logger = logging.getLogger(__name__)

MIN_VIEW_LEN = 3
EXACT_HAMILTON_PATH = 10


class _Crossing(NamedTuple):
    variant: CrossingVariant
    hamilton: Optional[Seq] = None
    index: Optional[int] = None
    new_cycle: Optional[Seq] = None
    grown: Optional[Seq] = None
    outside_edges: Optional[int] = None
    outside_order: Optional[int] = None


def _covered(cycles: Iterable[Sequence[int]]) -> Set[int]:
    return {v for c in cycles for v in c}


def _replace(cycles: List[Seq], indices: Iterable[int], new_cycles: Iterable[Seq]) -> List[Seq]:
    drop = set(indices)
    return [c for i, c in enumerate(cycles) if i not in drop] + [list(c) for c in new_cycles]


class PartitionService:
    """Constructive engine for M-2-factors with exactly k cycles"""

    def __init__(self):
        self.max_iterations = settings.max_improve_iterations
        self.local_budget = settings.local_budget_nodes
        self.exact_threshold = settings.exact_threshold

    # ------------------------------------------------------------------
    # shared helpers
    # ------------------------------------------------------------------

    def _view_cycles(self, view: MatchingView, cycles: Sequence[MCycle], min_view_len: int) -> List[Seq]:
        result: List[Seq] = []
        seen: Set[int] = set()
        for cycle in cycles:
            sequence = view.from_cycle(cycle)
            if not view.is_cycle(sequence):
                raise PreconditionError(f"{[str(v) for v in cycle.vertices]} is not an M-cycle of the host")
            if len(sequence) < min_view_len:
                raise PreconditionError(f"cycle of length {cycle.length} is shorter than {2 * min_view_len}")
            if seen & set(sequence):
                raise PreconditionError("cycles are not disjoint")
            seen |= set(sequence)
            result.append(sequence)
        return result

    def _to_factor(self, view: MatchingView, cycles: Sequence[Seq]) -> MTwoFactor:
        ordered = sorted(MatchingView.canonical_rotation(c) for c in cycles)
        return MTwoFactor(cycles=tuple(view.to_cycle(c) for c in ordered))

    def _insert_into(self, view: MatchingView, cycles: List[Seq], path: Seq, skip: Optional[int] = None) -> Optional[int]:
        """Splice path into the first cycle that accepts it; returns that cycle's index"""
        for index, cycle in enumerate(cycles):
            if index == skip:
                continue
            position = alternating_service.find_insertion(view, cycle, path, cyclic=True)
            if position is not None:
                cycles[index] = alternating_service.splice(cycle, path, position)
                return index
        return None

    def _absorb_ring(self, view: MatchingView, cycles: List[Seq], ring: Seq) -> bool:
        """Absorb a cycle of the remainder: insert some opening of it, else merge it"""
        for r in range(len(ring)):
            if self._insert_into(view, cycles, alternating_service.open_at(ring, r)) is not None:
                return True
        for index, cycle in enumerate(cycles):
            found = alternating_service.merge_positions(view, cycle, ring)
            if found is not None:
                cycles[index] = alternating_service.merge_at(cycle, ring, *found)
                return True
        return False

    def _hamilton_path(self, view: MatchingView, vertices: Set[int]) -> Optional[Seq]:
        tracker = BudgetTracker(self.local_budget)

        def extend(path: Seq, remaining: Set[int]) -> Optional[Seq]:
            tracker.tick()
            if not remaining:
                return list(path)
            for w in sorted(view.succ[path[-1]] & remaining):
                path.append(w)
                found = extend(path, remaining - {w})
                path.pop()
                if found is not None:
                    return found
            return None

        try:
            for start in sorted(vertices):
                found = extend([start], vertices - {start})
                if found is not None:
                    return found
        except BudgetExceeded as e:
            logger.debug(f"Hamilton path search stopped: {e}")
        return None

    def _local_cover(self, view: MatchingView, pool: Set[int], low: int, high: int) -> Optional[List[Seq]]:
        high = min(high, len(pool) // MIN_VIEW_LEN)
        if low > high:
            return None
        try:
            return search_cycle_cover(view.succ, pool, low, high, MIN_VIEW_LEN, BudgetTracker(self.local_budget))
        except BudgetExceeded as e:
            logger.debug(f"Local exact search stopped: {e}")
            return None

    # ------------------------------------------------------------------
    # crossing analysis
    # ------------------------------------------------------------------

    def _crossing(self, view: MatchingView, cycles: Sequence[Seq], path: Seq) -> _Crossing:
        m = len(path)
        if m == 1:
            return _Crossing(CrossingVariant.SMALL_OR_HAMILTONIAN)
        first, last = path[0], path[-1]
        if first in view.succ[last]:
            return _Crossing(CrossingVariant.SMALL_OR_HAMILTONIAN, hamilton=list(path))

        # closing cycles on the path: longest prefix cycles first, then longest suffix cycles
        splits: List[Tuple[Seq, Seq]] = []
        for j in range(m - 2, 1, -1):
            if first in view.succ[path[j]]:
                splits.append((list(path[:j + 1]), list(path[j + 1:])))
        for v in range(1, m - 2):
            if path[v] in view.succ[last]:
                splits.append((list(path[v:]), list(path[:v])))

        for d0, q0 in splits:
            position = alternating_service.find_insertion(view, d0, q0, cyclic=True)
            if position is not None:
                hamilton = alternating_service.splice(d0, q0, position)
                return _Crossing(CrossingVariant.SMALL_OR_HAMILTONIAN, hamilton=hamilton)
            for index, cycle in enumerate(cycles):
                position = alternating_service.find_insertion(view, cycle, q0, cyclic=True)
                if position is not None:
                    return _Crossing(
                        CrossingVariant.TWO_FACTOR_ABSORB,
                        index=index,
                        new_cycle=d0,
                        grown=alternating_service.splice(cycle, q0, position),
                    )

        outside = _covered(cycles)
        edges = view.end_edges(path, outside)
        variant = CrossingVariant.HIGH_OUTSIDE_DEGREE if edges >= len(outside) + 1 else CrossingVariant.INCONCLUSIVE
        return _Crossing(variant, outside_edges=edges, outside_order=2 * len(outside))

    def crossing_analysis(self, graph: BipartiteGraph, matching: Matching, cycles: Sequence[MCycle],
                          p0: MPath) -> CrossingOutcome:
        """Realise one outcome for a maximal M-path of the remainder against the cycles"""
        view = MatchingView(graph, matching)
        sequences = self._view_cycles(view, cycles, MIN_VIEW_LEN)
        path = view.from_path(p0)
        if not view.is_path(path):
            raise PreconditionError("p0 is not an M-path of the host")
        remainder = set(range(view.n)) - _covered(sequences)
        if not set(path) <= remainder:
            raise PreconditionError("p0 meets the cycles")
        outside_path = remainder - set(path)
        if view.pred[path[0]] & outside_path or view.succ[path[-1]] & outside_path:
            raise PreconditionError("p0 is not maximal in the remainder")

        result = self._crossing(view, sequences, path)
        logger.debug(f"Crossing analysis on a path of order {2 * len(path)}: {result.variant.value}")
        return CrossingOutcome(
            variant=result.variant,
            hamilton_cycle=None if result.hamilton is None else view.to_cycle(result.hamilton),
            absorb_index=result.index,
            new_cycle=None if result.new_cycle is None else view.to_cycle(result.new_cycle),
            grown_cycle=None if result.grown is None else view.to_cycle(result.grown),
            outside_edges=result.outside_edges,
            outside_order=result.outside_order,
        )

    # ------------------------------------------------------------------
    # absorption of the remainder (k+1 or k cycles)
    # ------------------------------------------------------------------

    def _endgame(self, view: MatchingView, cycles: List[Seq], remainder: Set[int], path: Seq,
                 floor: int, ceiling: int) -> bool:
        """Route a Hamilton path of the remainder through the cycles"""
        if len(path) == len(remainder):
            route = path
        elif len(remainder) <= EXACT_HAMILTON_PATH:
            route = self._hamilton_path(view, remainder)
        else:
            route = None
        if route is None:
            return False

        closes = len(route) >= MIN_VIEW_LEN and route[0] in view.succ[route[-1]]
        if closes and len(cycles) < ceiling:
            cycles.append(list(route))
            return True
        if closes and self._absorb_ring(view, cycles, route):
            return True

        if len(cycles) <= floor:
            return False
        # combine the route with an opened cycle C_j and insert the result into another cycle
        for j, cycle in enumerate(cycles):
            for s in range(len(cycle)):
                candidates = []
                if cycle[s] in view.succ[route[-1]]:
                    candidates.append(list(route) + alternating_service.open_at(cycle, s - 1))
                if route[0] in view.succ[cycle[s]]:
                    candidates.append(alternating_service.open_at(cycle, s) + list(route))
                for combined in candidates:
                    trial = [list(c) for c in cycles]
                    if self._insert_into(view, trial, combined, skip=j) is not None:
                        del trial[j]
                        cycles[:] = trial
                        return True
        return False

    def _absorb_exact(self, view: MatchingView, cycles: List[Seq], remainder: Set[int],
                      floor: int, ceiling: int) -> bool:
        order = sorted(range(len(cycles)), key=lambda i: (len(cycles[i]), i))
        groups: List[Tuple[int, ...]] = [()] + [(i,) for i in order] + list(combinations(order, 2))
        for group in groups:
            pool = set(remainder) | _covered(cycles[i] for i in group)
            others = len(cycles) - len(group)
            found = self._local_cover(view, pool, max(1, floor - others), ceiling - others)
            if found is not None:
                cycles[:] = _replace(cycles, group, found)
                return True
        return False

    def _absorb(self, view: MatchingView, cycles: List[Seq], floor: int, ceiling: int) -> Tuple[List[Seq], int]:
        """Absorb every uncovered vertex; the cycle count ends within floor..ceiling"""
        cycles = [list(c) for c in cycles]
        iterations = 0
        while True:
            remainder = set(range(view.n)) - _covered(cycles)
            if not remainder:
                break
            iterations += 1
            if iterations > self.max_iterations:
                raise SearchInconclusive("absorption did not converge")

            path = alternating_service.grow_path(view, remainder, [min(remainder)])
            if self._insert_into(view, cycles, path) is not None:
                logger.debug(f"Absorb {iterations}: inserted a path of {len(path)} vertices")
                continue
            if any(self._insert_into(view, cycles, [v]) is not None for v in sorted(remainder)):
                logger.debug(f"Absorb {iterations}: inserted a single vertex")
                continue

            crossing = self._crossing(view, cycles, path)
            if crossing.variant == CrossingVariant.TWO_FACTOR_ABSORB:
                cycles[crossing.index] = crossing.grown
                logger.debug(f"Absorb {iterations}: crossing grew cycle {crossing.index}")
                continue
            if crossing.hamilton is not None and self._absorb_ring(view, cycles, crossing.hamilton):
                logger.debug(f"Absorb {iterations}: absorbed a cycle of the remainder")
                continue

            if self._endgame(view, cycles, remainder, path, floor, ceiling):
                logger.debug(f"Absorb {iterations}: endgame routed the remainder, {len(cycles)} cycles")
                continue
            if self._absorb_exact(view, cycles, remainder, floor, ceiling):
                logger.debug(f"Absorb {iterations}: local exact cover, {len(cycles)} cycles")
                continue
            raise SearchInconclusive(f"{len(remainder)} vertices could not be absorbed")
        return cycles, iterations

    def build_k_or_k1_2factor(self, graph: BipartiteGraph, matching: Matching, k: int,
                              seed: Sequence[MCycle]) -> MTwoFactor:
        """Spanning M-2-factor with k+1 or k cycles of length >= 6 grown from k+1 disjoint cycles"""
        view = MatchingView(graph, matching)
        if 2 * view.n <= 6 * (k + 1):
            raise PreconditionError(f"order {2 * view.n} must exceed 6(k+1) = {6 * (k + 1)}")
        if len(seed) != k + 1:
            raise PreconditionError(f"seed must hold k+1 = {k + 1} cycles, got {len(seed)}")
        cycles, iterations = self._absorb(view, self._view_cycles(view, seed, MIN_VIEW_LEN), k, k + 1)
        factor = self._to_factor(view, cycles)
        logger.info(f"Absorption finished after {iterations} iterations with {len(cycles)} cycles")
        return factor

    # ------------------------------------------------------------------
    # reduction to exactly k cycles
    # ------------------------------------------------------------------

    def _merge_direct(self, view: MatchingView, cycles: List[Seq]) -> bool:
        for i, j in combinations(range(len(cycles)), 2):
            found = alternating_service.merge_positions(view, cycles[i], cycles[j])
            if found is not None:
                merged = alternating_service.merge_at(cycles[i], cycles[j], *found)
                cycles[:] = _replace(cycles, (i, j), [merged])
                return True
        return False

    def _merge_through_third(self, view: MatchingView, cycles: List[Seq], k: int) -> bool:
        """Cross arc a -> b joins C_i and C_j into a path, inserted into a third cycle"""
        count = len(cycles)
        for i, j in permutations(range(count), 2):
            first, second = cycles[i], cycles[j]
            position = {v: t for t, v in enumerate(second)}
            for ia, a in enumerate(first):
                for b in sorted(view.succ[a]):
                    if b not in position:
                        continue
                    path = alternating_service.open_at(first, ia) + alternating_service.open_at(second, position[b] - 1)
                    for h in range(count):
                        if h in (i, j):
                            continue
                        spot = alternating_service.find_insertion(view, cycles[h], path, cyclic=True)
                        if spot is None:
                            continue
                        merged = alternating_service.splice(cycles[h], path, spot)
                        if count - 2 >= k:
                            cycles[:] = _replace(cycles, (i, j, h), [merged])
                            return True
                        parts = alternating_service.split_positions(view, merged, MIN_VIEW_LEN)
                        if parts is not None:
                            cycles[:] = _replace(cycles, (i, j, h), list(parts))
                            return True
        return False

    def _redistribute(self, view: MatchingView, cycles: List[Seq]) -> bool:
        """Open C_h and insert its two halves into two other cycles"""
        count = len(cycles)
        for h in sorted(range(count), key=lambda i: (len(cycles[i]), i)):
            host = cycles[h]
            for r in range(len(host)):
                opened = alternating_service.open_at(host, r)
                for t in range(1, len(opened)):
                    head, tail = opened[:t], opened[t:]
                    for i in range(count):
                        if i == h:
                            continue
                        spot_i = alternating_service.find_insertion(view, cycles[i], head, cyclic=True)
                        if spot_i is None:
                            continue
                        for j in range(count):
                            if j in (h, i):
                                continue
                            spot_j = alternating_service.find_insertion(view, cycles[j], tail, cyclic=True)
                            if spot_j is not None:
                                grown = [alternating_service.splice(cycles[i], head, spot_i),
                                         alternating_service.splice(cycles[j], tail, spot_j)]
                                cycles[:] = _replace(cycles, (h, i, j), grown)
                                return True
        return False

    def _merge_exact(self, view: MatchingView, cycles: List[Seq], k: int) -> bool:
        count = len(cycles)
        groups = list(combinations(range(count), 2)) + list(combinations(range(count), 3))
        groups.sort(key=lambda g: (len(g), sum(len(cycles[i]) for i in g), g))
        for group in groups:
            others = count - len(group)
            found = self._local_cover(view, _covered(cycles[i] for i in group), max(1, k - others), len(group) - 1)
            if found is not None:
                cycles[:] = _replace(cycles, group, found)
                return True
        return False

    def _reduce(self, view: MatchingView, cycles: List[Seq], k: int) -> List[Seq]:
        cycles = [list(c) for c in cycles]
        while len(cycles) > k:
            if self._merge_direct(view, cycles):
                logger.debug(f"Reduce: direct merge, {len(cycles)} cycles")
            elif len(cycles) >= 3 and self._merge_through_third(view, cycles, k):
                logger.debug(f"Reduce: merge through a third cycle, {len(cycles)} cycles")
            elif len(cycles) >= 3 and self._redistribute(view, cycles):
                logger.debug(f"Reduce: redistributed a cycle, {len(cycles)} cycles")
            elif self._merge_exact(view, cycles, k):
                logger.debug(f"Reduce: local exact merge, {len(cycles)} cycles")
            else:
                raise SearchInconclusive(f"no merge reduces {len(cycles)} cycles towards {k}")
        return cycles

    def reduce_to_k(self, graph: BipartiteGraph, matching: Matching, k: int, factor: MTwoFactor) -> MTwoFactor:
        """Turn an M-2-factor with more than k cycles of length >= 6 into one with exactly k"""
        report = verification_service.verify_m_2factor(graph, matching, factor, len(factor.cycles), 2 * MIN_VIEW_LEN)
        if not report.passed:
            raise PreconditionError(f"factor is not a valid M-2-factor: {report.rules()}")
        if len(factor.cycles) < k:
            raise PreconditionError(f"factor has {len(factor.cycles)} cycles, fewer than k = {k}")
        if len(factor.cycles) == k:
            return factor
        view = MatchingView(graph, matching)
        cycles = self._reduce(view, self._view_cycles(view, factor.cycles, MIN_VIEW_LEN), k)
        return self._to_factor(view, cycles)

    # ------------------------------------------------------------------
    # solvers
    # ------------------------------------------------------------------

    def _constructive(self, graph: BipartiteGraph, matching: Matching, view: MatchingView, k: int,
                      outcome: SolveOutcome) -> Optional[List[Seq]]:
        for seeds in (k + 1, k):
            if MIN_VIEW_LEN * seeds > view.n:
                outcome.diagnostics.append(f"seeds={seeds}: order too small for {seeds} disjoint cycles")
                continue
            packing, pack_report = packing_service.pack_short_cycles(graph, matching, seeds)
            outcome.pack_iterations += pack_report.iterations
            if pack_report.status != PackStatus.SUCCESS:
                outcome.diagnostics.append(f"seeds={seeds}: packing {pack_report.status.value} "
                                           f"({pack_report.achieved}/{seeds})")
                continue
            try:
                seed = [view.from_cycle(c) for c in packing.cycles[:seeds]]
                absorbed, iterations = self._absorb(view, seed, k, k + 1)
                outcome.absorb_iterations += iterations
                return self._reduce(view, absorbed, k)
            except SearchInconclusive as e:
                outcome.diagnostics.append(f"seeds={seeds}: {e}")
                logger.info(f"Constructive stage with {seeds} seeds inconclusive: {e}")
        return None

    def _exact(self, view: MatchingView, k: int, min_view_len: int, outcome: SolveOutcome) -> Optional[List[Seq]]:
        small = 2 * view.n <= self.exact_threshold
        tracker = BudgetTracker(settings.budget_nodes, settings.budget_seconds) if small \
            else BudgetTracker(self.local_budget)
        try:
            found = search_cycle_cover(view.succ, range(view.n), k, k, min_view_len, tracker)
        except BudgetExceeded as e:
            outcome.diagnostics.append(f"exact search stopped: {e}")
            logger.warning(f"Exact fallback stopped: {e}")
            return None
        if found is None:
            outcome.proven_infeasible = True
            outcome.diagnostics.append("exact search exhausted: no solution exists")
        return found

    def _run(self, graph: BipartiteGraph, matching: Matching, k: int, min_len: int,
             rows: List[Applicability], gate_theorem: TheoremId) -> SolveOutcome:
        view = MatchingView(graph, matching)
        gate = condition_service.theorem_gate(rows, gate_theorem)
        outcome = SolveOutcome(
            status=SolveStatus.FALLBACK_EXHAUSTED,
            k=k,
            min_len=min_len,
            gate_passed=gate.hypotheses_met,
            applicability=rows,
        )
        if not gate.hypotheses_met:
            logger.warning(f"Theorem gate failed ({'; '.join(gate.missing)}); solving best-effort")

        min_view_len = max(2, -(-min_len // 2))
        cycles = None
        if k >= 1 and min_view_len <= MIN_VIEW_LEN:
            cycles = self._constructive(graph, matching, view, k, outcome)
            if cycles is not None:
                outcome.stage = SolveStage.CONSTRUCTIVE
        if cycles is None and k >= 1:
            cycles = self._exact(view, k, min_view_len, outcome)
            if cycles is not None:
                outcome.stage = SolveStage.EXACT

        if cycles is not None:
            factor = self._to_factor(view, cycles)
            report = verification_service.verify_m_2factor(graph, matching, factor, k, min_len)
            if report.passed:
                outcome.status = SolveStatus.SOLVED
                outcome.m_factor = factor
                logger.info(f"Solved with {k} cycles at stage {outcome.stage.value}")
                return outcome
            logger.error(f"Produced factor failed verification: {report.rules()}")
            outcome.diagnostics.append(f"verification failed: {rules}")
            outcome.stage = None

        if gate.hypotheses_met:
            outcome.status = SolveStatus.FALLBACK_EXHAUSTED
            if not outcome.proven_infeasible:
                logger.error(f"No solution found for k={k} although the theorem hypotheses hold")
        else:
            outcome.status = SolveStatus.HYPOTHESIS_UNMET
        return outcome

    def solve_bipartite(self, graph: BipartiteGraph, matching: Matching, k: int, min_len: int = 6) -> SolveOutcome:
        """M-2-factor with exactly k cycles of length >= min_len"""
        rows = condition_service.applicability(graph, k)
        return self._run(graph, matching, k, min_len, rows, TheoremId.DIRECTED_K_CYCLES)

    def solve(self, digraph: Digraph, k: int, min_len: int = 3) -> SolveOutcome:
        """Directed 2-factor with exactly k cycles of length >= min_len"""
        rows = condition_service.applicability(digraph, k)
        return self._solve_directed(digraph, k, min_len, rows, TheoremId.DIRECTED_K_CYCLES)

    def _solve_directed(self, digraph: Digraph, k: int, min_len: int, rows: List[Applicability],
                        gate_theorem: TheoremId) -> SolveOutcome:
        graph, matching, _ = transform_service.digraph_to_bipartite(digraph)
        outcome = self._run(graph, matching, k, 2 * min_len, rows, gate_theorem)
        outcome.min_len = min_len
        if outcome.m_factor is None:
            return outcome

        _, tag = transform_service.bipartite_to_digraph(graph, matching)
        try:
            factor = transform_service.translate_m2factor(outcome.m_factor, tag, host=(graph, matching))
            rules = verification_service.verify_directed_2factor(digraph, factor, k, min_len).rules()
        except PreconditionError as e:
            rules = [str(e)]
        if rules:
            logger.error(f"Translated factor failed verification: {rules}")
            outcome.status = SolveStatus.FALLBACK_EXHAUSTED if outcome.gate_passed else SolveStatus.HYPOTHESIS_UNMET
            outcome.m_factor = None
            outcome.stage = None
            outcome.diagnostics.append(f"verification failed: {rules}")
            return outcome
        outcome.factor = DirectedTwoFactor(cycles=tuple(sorted(factor.cycles)))
        return outcome

    def solve_undirected(self, graph: Graph, k: int, min_len: int = 3) -> SolveOutcome:
        """2-factor of an undirected graph with exactly k cycles, through its symmetrization"""
        rows = condition_service.applicability(graph, k)
        return self._solve_directed(transform_service.symmetrize(graph), k, max(min_len, 3), rows, TheoremId.BRANDT_ET_AL)


# Global instance
partition_service = PartitionService()
