"""Shared instances for the test suite"""
from typing import Tuple

import pytest

from app.models.schemas import BipartiteGraph, Digraph, Matching
from app.services.generator_service import generator_service
from app.services.transform_service import transform_service


def split(digraph: Digraph) -> Tuple[BipartiteGraph, Matching]:
    graph, matching, _ = transform_service.digraph_to_bipartite(digraph)
    return graph, matching


@pytest.fixture
def triangle() -> Digraph:
    return Digraph.directed_cycle(3)


@pytest.fixture
def two_triangles() -> Digraph:
    return Digraph(n=6, arcs=frozenset({(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)}))


@pytest.fixture
def sharp7() -> Digraph:
    """symmetrize(K_{3,4}): pair degree 6 = n - 1, no directed 2-factor"""
    return generator_service.sharpness_degree(7)


@pytest.fixture
def alternating_c6() -> Tuple[BipartiteGraph, Matching]:
    return split(Digraph.directed_cycle(3))


@pytest.fixture
def alternating_c8() -> Tuple[BipartiteGraph, Matching]:
    return split(Digraph.directed_cycle(4))


@pytest.fixture
def two_alternating_c6() -> Tuple[BipartiteGraph, Matching]:
    return split(Digraph(n=6, arcs=frozenset({(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)})))


@pytest.fixture
def k33() -> Tuple[BipartiteGraph, Matching]:
    graph = BipartiteGraph(x_count=3, y_count=3, edges=frozenset((x, y) for x in range(3) for y in range(3)))
    return graph, Matching.identity(3)


@pytest.fixture
def complete6() -> Digraph:
    return Digraph.complete(6)
