from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Tuple
from enum import Enum

import numpy as np

# Define enums FIRST (before they're used)
class Side(str, Enum):
    X = "x"
    Y = "y"

class Direction(str, Enum):
    SYMMETRIZE = "symmetrize"
    SPLIT = "split"
    CONTRACT = "contract"


class Node(NamedTuple):
    """A vertex of a bipartite host: partite side plus index within that side"""
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{self.side.value}{self.index}"


def x_node(index: int) -> Node:
    return Node(Side.X, index)


def y_node(index: int) -> Node:
    return Node(Side.Y, index)


Arc = Tuple[int, int]


class Digraph(BaseModel):
    """Simple digraph on vertices 0..n-1"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    arcs: FrozenSet[Arc] = Field(default_factory=frozenset)

    _succ: Tuple[FrozenSet[int], ...] = PrivateAttr(default=())
    _pred: Tuple[FrozenSet[int], ...] = PrivateAttr(default=())

    @model_validator(mode="after")
    def _check_arcs(self) -> "Digraph":
        for u, v in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) leaves the vertex range 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        return self

    def model_post_init(self, __context: Any) -> None:
        succ: List[set] = [set() for _ in range(self.n)]
        pred: List[set] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            succ[u].add(v)
            pred[v].add(u)
        self._succ = tuple(frozenset(s) for s in succ)
        self._pred = tuple(frozenset(p) for p in pred)

    @classmethod
    def complete(cls, n: int) -> "Digraph":
        return cls(n=n, arcs=frozenset((u, v) for u in range(n) for v in range(n) if u != v))

    @classmethod
    def directed_cycle(cls, n: int) -> "Digraph":
        return cls(n=n, arcs=frozenset((v, (v + 1) % n) for v in range(n)))

    def successors(self, v: int) -> FrozenSet[int]:
        return self._succ[v]

    def predecessors(self, v: int) -> FrozenSet[int]:
        return self._pred[v]

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._succ[u]

    def out_degree(self, v: int) -> int:
        return len(self._succ[v])

    def in_degree(self, v: int) -> int:
        return len(self._pred[v])

    def adjacency_matrix(self) -> np.ndarray:
        """Boolean n x n matrix, entry [u, v] set iff (u, v) is an arc"""
        matrix = np.zeros((self.n, self.n), dtype=bool)
        if self.arcs:
            idx = np.array(sorted(self.arcs), dtype=int)
            matrix[idx[:, 0], idx[:, 1]] = True
        return matrix


class Graph(BaseModel):
    """Simple undirected graph on vertices 0..n-1; edges stored as (u, v) with u < v"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    edges: FrozenSet[Arc] = Field(default_factory=frozenset)

    _adj: Tuple[FrozenSet[int], ...] = PrivateAttr(default=())

    @field_validator("edges", mode="before")
    @classmethod
    def _normalize(cls, value: Any) -> Any:
        if value is None:
            return frozenset()
        normalized = set()
        for pair in value:
            u, v = pair
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            edge = (min(u, v), max(u, v))
            if edge in normalized:
                raise ValueError(f"edge {{{edge[0]},{edge[1]}}} listed twice")
            normalized.add(edge)
        return frozenset(normalized)

    @model_validator(mode="after")
    def _check_range(self) -> "Graph":
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {{{u},{v}}} leaves the vertex range 0..{self.n - 1}")
        return self

    def model_post_init(self, __context: Any) -> None:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self._adj = tuple(frozenset(a) for a in adj)

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def adjacency_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            matrix[u, v] = matrix[v, u] = True
        return matrix


class BipartiteGraph(BaseModel):
    """Bipartite graph with sides X = 0..x_count-1 and Y = 0..y_count-1; edges are (x, y)"""
    model_config = ConfigDict(frozen=True)

    x_count: int = Field(ge=0)
    y_count: int = Field(ge=0)
    edges: FrozenSet[Arc] = Field(default_factory=frozenset)

    _x_adj: Tuple[FrozenSet[int], ...] = PrivateAttr(default=())
    _y_adj: Tuple[FrozenSet[int], ...] = PrivateAttr(default=())

    @model_validator(mode="after")
    def _check_edges(self) -> "BipartiteGraph":
        for x, y in self.edges:
            if not (0 <= x < self.x_count and 0 <= y < self.y_count):
                raise ValueError(f"edge (x{x},y{y}) does not join X to Y")
        return self

    def model_post_init(self, __context: Any) -> None:
        x_adj: List[set] = [set() for _ in range(self.x_count)]
        y_adj: List[set] = [set() for _ in range(self.y_count)]
        for x, y in self.edges:
            x_adj[x].add(y)
            y_adj[y].add(x)
        self._x_adj = tuple(frozenset(a) for a in x_adj)
        self._y_adj = tuple(frozenset(a) for a in y_adj)

    @property
    def balanced(self) -> bool:
        return self.x_count == self.y_count

    @property
    def order(self) -> int:
        return self.x_count + self.y_count

    def x_neighbors(self, x: int) -> FrozenSet[int]:
        return self._x_adj[x]

    def y_neighbors(self, y: int) -> FrozenSet[int]:
        return self._y_adj[y]

    def has_edge(self, x: int, y: int) -> bool:
        return y in self._x_adj[x]

    def adjacent(self, a: Node, b: Node) -> bool:
        """Adjacency between two tagged vertices (always False inside one side)"""
        if a.side == b.side:
            return False
        x, y = (a, b) if a.side == Side.X else (b, a)
        return self.has_edge(x.index, y.index)

    def degree(self, node: Node) -> int:
        if node.side == Side.X:
            return len(self._x_adj[node.index])
        return len(self._y_adj[node.index])

    def contains(self, node: Node) -> bool:
        limit = self.x_count if node.side == Side.X else self.y_count
        return 0 <= node.index < limit

    def biadjacency(self) -> np.ndarray:
        """Boolean x_count x y_count matrix"""
        matrix = np.zeros((self.x_count, self.y_count), dtype=bool)
        if self.edges:
            idx = np.array(sorted(self.edges), dtype=int)
            matrix[idx[:, 0], idx[:, 1]] = True
        return matrix


class Matching(BaseModel):
    """Set of (x, y) pairs, no two sharing an endpoint"""
    model_config = ConfigDict(frozen=True)

    edges: FrozenSet[Arc] = Field(default_factory=frozenset)

    _x_mate: Dict[int, int] = PrivateAttr(default_factory=dict)
    _y_mate: Dict[int, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_disjoint(self) -> "Matching":
        xs = [x for x, _ in self.edges]
        ys = [y for _, y in self.edges]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("two matching edges share an endpoint")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._x_mate = {x: y for x, y in self.edges}
        self._y_mate = {y: x for x, y in self.edges}

    @classmethod
    def identity(cls, n: int) -> "Matching":
        return cls(edges=frozenset((v, v) for v in range(n)))

    def partner(self, node: Node) -> Optional[Node]:
        """overline{v}: the matched partner, or None when unmatched"""
        if node.side == Side.X:
            y = self._x_mate.get(node.index)
            return None if y is None else y_node(y)
        x = self._y_mate.get(node.index)
        return None if x is None else x_node(x)

    def mate_of_x(self, x: int) -> Optional[int]:
        return self._x_mate.get(x)

    def mate_of_y(self, y: int) -> Optional[int]:
        return self._y_mate.get(y)

    def contains(self, a: Node, b: Node) -> bool:
        return self.partner(a) == b

    def within(self, graph: BipartiteGraph) -> bool:
        return self.edges <= graph.edges

    def is_perfect(self, graph: BipartiteGraph) -> bool:
        return self.within(graph) and graph.balanced and len(self.edges) == graph.x_count


def _check_alternating_sides(vertices: Tuple[Node, ...]) -> None:
    if len(set(vertices)) != len(vertices):
        raise ValueError("vertices repeat")
    for a, b in zip(vertices, vertices[1:]):
        if a.side == b.side:
            raise ValueError(f"consecutive vertices {a} and {b} lie on the same side")


class MPath(BaseModel):
    """Alternating path v1..v2l whose first and last edges belong to the matching.

    Host-dependent invariants (edges present, M alternation) are checked by
    the verification service; the model itself guarantees even order,
    distinct vertices and alternating sides.
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[Node, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "MPath":
        if len(self.vertices) < 2 or len(self.vertices) % 2:
            raise ValueError(f"an M-path has even order >= 2, got {len(self.vertices)}")
        _check_alternating_sides(self.vertices)
        return self

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def ends(self) -> Tuple[Node, Node]:
        return self.vertices[0], self.vertices[-1]

    def vertex_set(self) -> FrozenSet[Node]:
        return frozenset(self.vertices)


class MCycle(BaseModel):
    """Alternating cycle with a fixed orientation.

    Cycles built by the services start at the matched edge with the smallest
    X endpoint, entered from its Y end, so equal cycles compare equal.
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[Node, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "MCycle":
        if len(self.vertices) < 4 or len(self.vertices) % 2:
            raise ValueError(f"an M-cycle has even length >= 4, got {len(self.vertices)}")
        _check_alternating_sides(self.vertices)
        return self

    @property
    def length(self) -> int:
        return len(self.vertices)

    def vertex_set(self) -> FrozenSet[Node]:
        return frozenset(self.vertices)

    def edges(self) -> List[Tuple[Node, Node]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def successor(self, node: Node) -> Node:
        """x+ along the fixed orientation"""
        i = self.vertices.index(node)
        return self.vertices[(i + 1) % len(self.vertices)]

    def predecessor(self, node: Node) -> Node:
        """x- along the fixed orientation"""
        i = self.vertices.index(node)
        return self.vertices[i - 1]


class DirectedTwoFactor(BaseModel):
    """Candidate directed 2-factor: each cycle is a vertex sequence closed by its last arc"""
    model_config = ConfigDict(frozen=True)

    cycles: Tuple[Tuple[int, ...], ...] = Field(default_factory=tuple)

    @property
    def lengths(self) -> List[int]:
        return [len(c) for c in self.cycles]


class MTwoFactor(BaseModel):
    """Candidate M-2-factor in a bipartite host"""
    model_config = ConfigDict(frozen=True)

    cycles: Tuple[MCycle, ...] = Field(default_factory=tuple)

    @property
    def lengths(self) -> List[int]:
        return [c.length for c in self.cycles]


class CorrespondenceTag(BaseModel):
    """Vertex table of a digraph <-> bipartite correspondence.

    Entry i is the matched pair (x, y) that stands for digraph vertex i.
    For symmetrization the pair is (i, i) and names the same vertex twice.
    """
    model_config = ConfigDict(frozen=True)

    direction: Direction
    vertex_map: Tuple[Arc, ...]

    @model_validator(mode="after")
    def _check_bijection(self) -> "CorrespondenceTag":
        xs = [x for x, _ in self.vertex_map]
        ys = [y for _, y in self.vertex_map]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("vertex_map is not a bijection")
        return self

    @property
    def n(self) -> int:
        return len(self.vertex_map)


class InsertionEdge(BaseModel):
    """Non-M host edge uv whose ends are joined to the two ends of a path Q"""
    model_config = ConfigDict(frozen=True)

    edge: Tuple[Node, Node]
    u_end: Node  # end of Q adjacent to edge[0]
    v_end: Node  # end of Q adjacent to edge[1]


class MergeWitness(BaseModel):
    """Two non-M edges (one per cycle) and the two cross edges replacing them"""
    model_config = ConfigDict(frozen=True)

    first_edge: Tuple[Node, Node]
    second_edge: Tuple[Node, Node]
    cross_edges: Tuple[Tuple[Node, Node], Tuple[Node, Node]]

