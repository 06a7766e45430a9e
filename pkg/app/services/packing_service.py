# app/services/packing_service.py
"""Disjoint alternating cycles of length 6 or 8.

Works on the contracted view, where the cycles are directed triangles and
directed 4-cycles. The improvement loop raises the potential
(t, -sum of lengths) with every accepted move; an exact backtracking net
covers small hosts and stalls.
"""
import logging
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx

from app.models.result_schemas import Packing, PackMove, PackReport, PackStatus
from app.models.schemas import BipartiteGraph, Matching, MPath
from app.services.alternating_service import alternating_service
from app.services.condition_service import condition_service
from app.services.matching_view import MatchingView, Seq
from app.services.oracle_service import BudgetTracker
from app.utils.config import settings
from app.utils.errors import BudgetExceeded, PreconditionError

logger = logging.getLogger(__name__)

Cycles = List[Tuple[int, ...]]
SHORT = (3, 4)


class PackingState:
    """Mutable search state: short view cycles plus the uncovered remainder"""

    def __init__(self, view: MatchingView, cycles: Cycles, remainder: Set[int]):
        self.view = view
        self.cycles = cycles
        self.remainder = remainder

    @property
    def potential(self) -> Tuple[int, int]:
        return len(self.cycles), -sum(len(c) for c in self.cycles)

    def replaced(self, index: Optional[int], new_cycles: Cycles) -> "PackingState":
        kept = [c for i, c in enumerate(self.cycles) if i != index]
        covered = set(self.remainder)
        if index is not None:
            covered |= set(self.cycles[index])
        for cycle in new_cycles:
            covered -= set(cycle)
        return PackingState(self.view, kept + [MatchingView.canonical_rotation(c) for c in new_cycles], covered)

    def to_packing(self) -> Packing:
        return Packing(
            cycles=tuple(self.view.to_cycle(c) for c in self.cycles),
            remainder=self.view.nodes_of_set(self.remainder),
        )


def _disjoint_pair(view: MatchingView, pool: Set[int]) -> Optional[Cycles]:
    """Two disjoint short cycles inside pool, shortest total first"""
    found = [c for length in SHORT for c in alternating_service.iter_short_cycles(view, pool, length)]
    best: Optional[Cycles] = None
    for first, second in combinations(found, 2):
        if set(first) & set(second):
            continue
        if best is None or len(first) + len(second) < len(best[0]) + len(best[1]):
            best = [first, second]
            if len(first) + len(second) == 6:
                break
    return best


class PackingService:
    """Constructive engine for disjoint short alternating cycles"""

    def __init__(self):
        self.exact_threshold = settings.exact_threshold
        self.path_pair_candidates = settings.path_pair_candidates
        self.max_iterations = settings.max_improve_iterations

    # -- state conversion ---------------------------------------------------

    def _state_of(self, view: MatchingView, packing: Packing) -> PackingState:
        cycles: Cycles = []
        covered: Set[int] = set()
        for cycle in packing.cycles:
            if cycle.length not in (6, 8):
                raise PreconditionError(f"packed cycles have length 6 or 8, got {cycle.length}")
            sequence = view.from_cycle(cycle)
            if not view.is_cycle(sequence) or covered & set(sequence):
                raise PreconditionError("packing cycles must be disjoint alternating cycles of the host")
            covered |= set(sequence)
            cycles.append(MatchingView.canonical_rotation(sequence))
        return PackingState(view, cycles, set(range(view.n)) - covered)

    # -- moves --------------------------------------------------------------

    def _direct(self, state: PackingState) -> Optional[PackingState]:
        """m1: a new short cycle entirely inside the remainder"""
        for length in SHORT:
            cycle = next(alternating_service.iter_short_cycles(state.view, state.remainder, length), None)
            if cycle is not None:
                return state.replaced(None, [cycle])
        return None

    def _shrink(self, state: PackingState) -> Optional[PackingState]:
        """m2: replace an 8-cycle by a 6-cycle meeting the remainder"""
        view = state.view
        for index, cycle in enumerate(state.cycles):
            if len(cycle) != 4:
                continue
            for p in sorted(state.remainder):
                found = alternating_service.lemma1_sequence(view, cycle, [p], 2)
                if found is not None:
                    return state.replaced(index, [found])
            for p in sorted(state.remainder):
                for q in sorted(view.succ[p] & state.remainder):
                    found = alternating_service.lemma1_sequence(view, cycle, [p, q], 1)
                    if found is not None:
                        return state.replaced(index, [found])
            members = set(cycle)
            for triangle in alternating_service.iter_short_cycles(view, members | state.remainder, 3):
                if members & set(triangle):
                    return state.replaced(index, [triangle])
        return None

    def _path_family(self, state: PackingState) -> List[Seq]:
        """Disjoint order-4 M-paths of the remainder, then single M edges.

        The paths maximise the number whose end degrees reach sigma11, then
        the number of paths. Star paths weigh more than any count of
        ordinary ones, so one maximum-weight matching settles both.
        """
        view = state.view
        remainder = state.remainder
        threshold = condition_service.sigma11(view.graph).value
        star_weight = len(remainder) // 2 + 1

        network = nx.Graph()
        network.add_nodes_from(sorted(remainder))
        for a in sorted(remainder):
            for b in sorted(view.succ[a] & remainder):
                end_sum = view.y_degree(a) + view.x_degree(b)
                star = threshold is not None and end_sum >= threshold
                rank = (star, end_sum)
                current = network.get_edge_data(a, b)
                if current is None or rank > current["rank"]:
                    network.add_edge(a, b, weight=star_weight if star else 1, rank=rank, path=[a, b])

        matched = nx.max_weight_matching(network, weight="weight")
        family: List[Seq] = sorted(network.edges[a, b]["path"] for a, b in matched)
        used = {v for path in family for v in path}
        stars = sum(1 for a, b in matched if network.edges[a, b]["rank"][0])
        logger.debug(f"Path family: {len(family)} paths, {stars} reaching sigma11 {threshold}")
        family.extend([v] for v in sorted(remainder - used))
        return family

    def _path_pair(self, state: PackingState) -> Optional[PackingState]:
        """m3: two paths of the remainder plus one packed cycle hold two disjoint short cycles"""
        view = state.view
        family = self._path_family(state)
        if len(family) < 2:
            return None
        for index, cycle in enumerate(state.cycles):
            members = set(cycle)
            scored = sorted(family, key=lambda p: (-view.end_edges(p, members), p))
            candidates = scored[: self.path_pair_candidates]
            for first, second in combinations(candidates, 2):
                pool = members | set(first) | set(second)
                pair = _disjoint_pair(view, pool)
                if pair is not None:
                    return state.replaced(index, pair)
        return None

    def _improve(self, state: PackingState) -> Tuple[Optional[PackingState], Optional[PackMove]]:
        for move, step in ((PackMove.DIRECT, self._direct), (PackMove.SHRINK, self._shrink),
                           (PackMove.PATH_PAIR, self._path_pair)):
            improved = step(state)
            if improved is not None:
                if improved.potential <= state.potential:
                    raise AssertionError(f"move {move.value} did not raise the potential")
                return improved, move
        return None, None

    # -- exact net ----------------------------------------------------------

    def _exact(self, view: MatchingView, target: int, budget_nodes: int) -> Optional[Cycles]:
        """Backtracking over vertex sets of short cycles for target disjoint ones"""
        by_set: Dict[FrozenSet[int], Tuple[int, ...]] = {}
        for length in SHORT:
            for cycle in alternating_service.iter_short_cycles(view, range(view.n), length):
                by_set.setdefault(frozenset(cycle), cycle)
        options = sorted(by_set, key=lambda s: (len(s), sorted(s)))
        tracker = BudgetTracker(budget_nodes)

        def choose(start: int, used: FrozenSet[int], chosen: List[FrozenSet[int]]) -> Optional[List[FrozenSet[int]]]:
            if len(chosen) == target:
                return chosen
            if view.n - len(used) < (target - len(chosen)) * 3:
                return None
            for i in range(start, len(options)):
                tracker.tick()
                option = options[i]
                if option & used:
                    continue
                found = choose(i + 1, used | option, chosen + [option])
                if found is not None:
                    return found
            return None

        try:
            chosen = choose(0, frozenset(), [])
        except BudgetExceeded as e:
            logger.warning(f"Exact packing search stopped: {e}")
            return None
        return None if chosen is None else [by_set[s] for s in chosen]

    # -- public operations --------------------------------------------------

    def path_family(self, graph: BipartiteGraph, matching: Matching, state: Packing) -> List[MPath]:
        """Order-4 M-paths the path-pair move draws from, for the remainder of state"""
        view = MatchingView(graph, matching)
        family = self._path_family(self._state_of(view, state))
        return [view.to_path(path) for path in family if len(path) == 2]

    def improve_packing(self, graph: BipartiteGraph, matching: Matching, state: Packing) -> Optional[Packing]:
        """One improvement move (m1, then m2, then m3); None when stalled"""
        view = MatchingView(graph, matching)
        improved, move = self._improve(self._state_of(view, state))
        if improved is None:
            return None
        logger.debug(f"Packing move {move.value}: t={len(improved.cycles)}")
        return improved.to_packing()

    def pack_short_cycles(self, graph: BipartiteGraph, matching: Matching, k: int) -> Tuple[Packing, PackReport]:
        """k disjoint M-cycles of length 6 or 8, or the best packing found"""
        view = MatchingView(graph, matching)
        hypotheses_met = condition_service.sigma11(graph).satisfied and view.n >= 12 * k - 9
        state = PackingState(view, [], set(range(view.n)))
        moves: List[PackMove] = []
        iterations = 0

        while len(state.cycles) < k and iterations < self.max_iterations:
            improved, move = self._improve(state)
            if improved is None:
                break
            state = improved
            moves.append(move)
            iterations += 1
            logger.debug(f"Packing iteration {iterations}: {move.value}, t={len(state.cycles)}")

        stalled = len(state.cycles) < k
        if stalled and (2 * view.n <= self.exact_threshold or hypotheses_met):
            if hypotheses_met and 2 * view.n > self.exact_threshold:
                logger.error(f"Packing moves stalled at t={len(state.cycles)} < {k} although the hypotheses hold")
            budget_nodes = settings.budget_nodes if 2 * view.n <= self.exact_threshold else settings.local_budget_nodes
            exact = self._exact(view, k, budget_nodes)
            if exact is not None:
                covered = {v for c in exact for v in c}
                state = PackingState(view, [MatchingView.canonical_rotation(c) for c in exact], set(range(view.n)) - covered)
                moves.append(PackMove.EXACT)

        achieved = len(state.cycles)
        if achieved >= k:
            status = PackStatus.SUCCESS
        elif hypotheses_met:
            status = PackStatus.STALLED
        else:
            status = PackStatus.HYPOTHESIS_UNMET
        logger.info(f"Packing finished: {achieved}/{k} cycles, status {status.value}, {iterations} iterations")
        report = PackReport(achieved=achieved, target=k, moves_log=moves, status=status, iterations=iterations)
        return state.to_packing(), report


# Global instance
packing_service = PackingService()
