# app/services/explore_service.py
"""Small-order explorer for disjoint-cycle questions.

Each sample draws a random instance meeting the mode's degree condition and
asks the exact oracle for k disjoint cycles; an infeasible answer is a
counterexample candidate. Per-sample seeds are spawned from the master
seed, so a report does not depend on the number of workers.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, NamedTuple, Optional

import networkx as nx
import numpy as np

from app.models.result_schemas import (
    ExploreMode,
    ExploreParams,
    ExploreReport,
    OracleBudget,
    OracleStatus,
)
from app.models.schemas import Digraph
from app.services.condition_service import condition_service
from app.services.generator_service import generator_service, graph_from_networkx
from app.services.oracle_service import oracle_service
from app.services.transform_service import transform_service
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)


class SampleResult(NamedTuple):
    n: int
    status: Optional[OracleStatus]  # None when the order admits no instance of the mode
    digraph: Optional[Digraph] = None


def _problem1_instance(n: int, k: int, rng: np.random.Generator) -> Digraph:
    """Pair degree >= 4k-1 by monotone deletion, stopped at a random density"""
    density = float(rng.uniform(0.0, 1.0))
    seed = int(rng.integers(0, 2**31 - 1))
    return generator_service.random_woodall(n, 4 * k - 1 - n, seed, density=density)


def _bermond_thomassen_instance(n: int, k: int, rng: np.random.Generator) -> Digraph:
    """Every vertex draws between 2k-1 and n-1 random out-neighbours"""
    arcs = set()
    for u in range(n):
        others = np.array([v for v in range(n) if v != u])
        degree = int(rng.integers(2 * k - 1, n))
        for v in rng.choice(others, size=degree, replace=False):
            arcs.add((u, int(v)))
    return Digraph(n=n, arcs=frozenset(arcs))


def _sigma2_instance(n: int, k: int, rng: np.random.Generator) -> Digraph:
    """G(n, p) topped up with edges between minimising pairs until sigma2 >= 4k-1"""
    network = nx.gnp_random_graph(n, float(rng.uniform(0.0, 1.0)), seed=int(rng.integers(0, 2**31 - 1)))
    graph = graph_from_networkx(network)
    report = condition_service.sigma2_disjoint_cycles(graph, k)
    while not report.satisfied:
        u, v = report.witness
        network.add_edge(u, v)
        graph = graph_from_networkx(network)
        report = condition_service.sigma2_disjoint_cycles(graph, k)
    return transform_service.symmetrize(graph)


def _admits(mode: ExploreMode, n: int, k: int) -> bool:
    if mode == ExploreMode.BERMOND_THOMASSEN:
        return n - 1 >= 2 * k - 1
    return n >= 3 * k


def run_sample(mode: ExploreMode, k: int, n: int, seed: np.random.SeedSequence, budget: OracleBudget) -> SampleResult:
    """Draw one instance and ask the oracle; top-level so worker processes can pickle it"""
    if not _admits(mode, n, k):
        return SampleResult(n=n, status=None)
    rng = np.random.default_rng(seed)
    if mode == ExploreMode.PROBLEM1:
        digraph, min_len = _problem1_instance(n, k, rng), 3
    elif mode == ExploreMode.BERMOND_THOMASSEN:
        digraph, min_len = _bermond_thomassen_instance(n, k, rng), 2
    else:
        digraph, min_len = _sigma2_instance(n, k, rng), 3
    result = oracle_service.oracle_disjoint_cycles(digraph, k, min_len, budget)
    return SampleResult(n=n, status=result.status, digraph=digraph)


class ExploreService:
    """Random search for counterexamples at desk scale"""

    def explore(self, params: ExploreParams) -> ExploreReport:
        if params.n_max > params.budget.max_vertices:
            raise PreconditionError(
                f"n_max {params.n_max} exceeds the oracle limit of {params.budget.max_vertices} vertices"
            )
        report = ExploreReport(params=params)
        if params.samples == 0:
            return report

        children = np.random.SeedSequence(params.seed).spawn(params.samples)
        orders = [
            int(np.random.default_rng(child.spawn(1)[0]).integers(params.n_min, params.n_max + 1))
            for child in children
        ]
        jobs = [(params.mode, params.k, n, child, params.budget) for n, child in zip(orders, children)]

        if params.workers > 1:
            with ProcessPoolExecutor(max_workers=params.workers) as pool:
                results: List[SampleResult] = list(pool.map(run_sample, *zip(*jobs)))
        else:
            results = [run_sample(*job) for job in jobs]

        for result in results:
            if result.status is None:
                report.skipped += 1
                continue
            report.samples_run += 1
            report.by_order[result.n] = report.by_order.get(result.n, 0) + 1
            if result.status == OracleStatus.FEASIBLE:
                report.feasible += 1
            elif result.status == OracleStatus.BUDGET:
                report.budget_hits += 1
            else:
                report.violations.append(result.digraph)
                logger.warning(f"Counterexample candidate on {result.n} vertices ({params.mode.value}, k={params.k})")

        logger.info(
            f"Explore {params.mode.value}: {report.samples_run} samples, {len(report.violations)} violations, "
            f"{report.budget_hits} budget hits, {report.skipped} skipped"
        )
        return report


# Global instance
explore_service = ExploreService()
