# app/services/generator_service.py
"""Instance factories: sharpness families and seeded near-threshold instances.

Random instances are biased samples (monotone deletion from the complete
digraph in a seeded order), not uniform samples of the condition class.
"""
import logging
from typing import Optional, Tuple, Union

import networkx as nx
import numpy as np

from app.models.result_schemas import ConditionReport, GenFamily, GenSpec
from app.models.schemas import BipartiteGraph, Digraph, Graph, Matching
from app.services.condition_service import condition_service
from app.services.transform_service import transform_service
from app.utils.errors import PreconditionError

logger = logging.getLogger(__name__)

Instance = Union[Digraph, Tuple[BipartiteGraph, Matching]]


def graph_from_networkx(network: nx.Graph) -> Graph:
    """Relabel nodes to 0..n-1 in sorted order"""
    index = {node: i for i, node in enumerate(sorted(network.nodes))}
    return Graph(n=len(index), edges=frozenset((index[u], index[v]) for u, v in network.edges))


def digraph_from_networkx(network: nx.DiGraph) -> Digraph:
    index = {node: i for i, node in enumerate(sorted(network.nodes))}
    return Digraph(n=len(index), arcs=frozenset((index[u], index[v]) for u, v in network.edges))


def _check(report: ConditionReport) -> None:
    if not report.satisfied:
        raise AssertionError(f"generated instance fails {report.name}: {report.value} < {report.threshold}")


class GeneratorService:
    """Sharpness families and random instances meeting the degree conditions"""

    def sharpness_degree(self, n: int) -> Digraph:
        """symmetrize(K_{(n-1)/2,(n+1)/2}): pair degree n-1 and no directed 2-factor"""
        if n < 3 or n % 2 == 0:
            raise PreconditionError(f"n must be odd and at least 3, got {n}")
        return transform_service.symmetrize(graph_from_networkx(nx.complete_bipartite_graph((n - 1) // 2, (n + 1) // 2)))

    def sharpness_order(self, k: int) -> Digraph:
        """symmetrize(K_{2k-1,2k-1}) of order 4k-2"""
        if k < 1:
            raise PreconditionError(f"k must be positive, got {k}")
        return transform_service.symmetrize(graph_from_networkx(nx.complete_bipartite_graph(2 * k - 1, 2 * k - 1)))

    def random_woodall(self, n: int, margin: int, seed: int, density: Optional[float] = None) -> Digraph:
        """Delete arcs of the complete digraph in seeded order while d+(u) + d-(v) >= n + margin holds.

        density, when given, stops deletion once the arc density reaches it.
        """
        if n < 2:
            raise PreconditionError(f"n must be at least 2, got {n}")
        threshold = n + margin
        if threshold < 0:
            raise PreconditionError(f"margin {margin} gives a negative threshold {threshold}")

        rng = np.random.default_rng(seed)
        adjacency = ~np.eye(n, dtype=bool)
        out_degree = adjacency.sum(axis=1)
        in_degree = adjacency.sum(axis=0)
        floor_arcs = 0 if density is None else int(np.ceil(density * n * (n - 1)))
        arc_count = n * (n - 1)

        candidates = np.argwhere(adjacency)
        for u, v in candidates[rng.permutation(len(candidates))]:
            if arc_count <= floor_arcs:
                break
            if out_degree[u] + in_degree[v] - 2 < threshold:
                continue
            leaving = ~adjacency[u]
            leaving[u] = False
            if leaving.any() and out_degree[u] - 1 + in_degree[leaving].min() < threshold:
                continue
            entering = ~adjacency[:, v]
            entering[v] = False
            if entering.any() and out_degree[entering].min() + in_degree[v] - 1 < threshold:
                continue
            adjacency[u, v] = False
            out_degree[u] -= 1
            in_degree[v] -= 1
            arc_count -= 1

        arcs = frozenset((int(u), int(v)) for u, v in np.argwhere(adjacency))
        digraph = Digraph(n=n, arcs=arcs)
        _check(condition_service.pair_degree_value(digraph, threshold, name="woodall"))
        logger.debug(f"random_woodall(n={n}, margin={margin}, seed={seed}): {len(arcs)} arcs")
        return digraph

    def random_lasvergnas(self, n: int, margin: int, seed: int,
                          shuffle_sides: bool = True) -> Tuple[BipartiteGraph, Matching]:
        """Balanced bipartite graph with a planted perfect matching and sigma11 >= n + 2 + margin"""
        graph, matching, _ = transform_service.digraph_to_bipartite(self.random_woodall(n, margin, seed))
        if shuffle_sides:
            permutation = np.random.default_rng([seed, 1]).permutation(n)
            graph = BipartiteGraph(
                x_count=n,
                y_count=n,
                edges=frozenset((x, int(permutation[y])) for x, y in graph.edges),
            )
            matching = Matching(edges=frozenset((x, int(permutation[x])) for x in range(n)))
        report = condition_service.sigma11(graph)
        _check(ConditionReport.of("sigma11", report.value, n + 2 + margin, report.witness))
        return graph, matching

    def generate(self, spec: GenSpec) -> Instance:
        """Dispatch on the family named by spec"""

        def need(value: Optional[int], name: str) -> int:
            if value is None:
                raise PreconditionError(f"family {spec.family.value} needs {name}")
            return value

        if spec.family == GenFamily.SHARPNESS_DEGREE:
            return self.sharpness_degree(need(spec.n, "n"))
        if spec.family == GenFamily.SHARPNESS_ORDER:
            return self.sharpness_order(need(spec.k, "k"))
        if spec.family == GenFamily.RANDOM_WOODALL:
            return self.random_woodall(need(spec.n, "n"), spec.margin, spec.seed, spec.density)
        if spec.family == GenFamily.RANDOM_LASVERGNAS:
            return self.random_lasvergnas(need(spec.n, "n"), spec.margin, spec.seed)
        if spec.family == GenFamily.COMPLETE:
            return digraph_from_networkx(nx.complete_graph(need(spec.n, "n"), create_using=nx.DiGraph))
        if spec.family == GenFamily.DIRECTED_CYCLE:
            return digraph_from_networkx(nx.cycle_graph(need(spec.n, "n"), create_using=nx.DiGraph))
        raise PreconditionError(f"unknown family {spec.family}")


# Global instance
generator_service = GeneratorService()
