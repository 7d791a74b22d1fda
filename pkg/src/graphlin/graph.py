"""Immutable undirected simple-graph representation and basic queries."""

from __future__ import annotations

import hashlib
from collections import deque
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Edge = Tuple[int, int]


class GraphError(ValueError):
    pass


class SelfLoopError(GraphError):
    pass


class UnknownEndpointError(GraphError):
    pass


class UnknownNodeError(GraphError):
    pass


class EmptyGraphError(GraphError):
    pass


def canonical_edge(u: int, v: int) -> Edge:
    """Store edges with the smaller endpoint first."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph. Immutable after construction.

    Safe to share across threads: all queries are read-only.
    """

    __slots__ = ("nodes", "edges", "_adj", "_hash")

    def __init__(self, nodes: Iterable[int], edges: Iterable[Edge]):
        node_list = sorted(set(int(n) for n in nodes))
        if any(n < 0 for n in node_list):
            raise GraphError("node ids must be non-negative")
        node_set = set(node_list)

        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise SelfLoopError(f"self-loop at node {u}")
            if u not in node_set or v not in node_set:
                raise UnknownEndpointError(f"edge ({u}, {v}) references unknown node")
            canon.add(canonical_edge(u, v))

        self.nodes: Tuple[int, ...] = tuple(node_list)
        self.edges: frozenset = frozenset(canon)

        adj: Dict[int, List[int]] = {n: [] for n in node_list}
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        self._adj: Dict[int, Tuple[int, ...]] = {
            n: tuple(sorted(ns)) for n, ns in adj.items()
        }
        self._hash: Optional[str] = None

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        self._check_node(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check_node(v)
        return len(self._adj[v])

    def has_node(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edges

    def sorted_edges(self) -> List[Edge]:
        """Edges sorted lexicographically; the canonical serialization order."""
        return sorted(self.edges)

    def canonical_hash(self) -> str:
        """Stable hex digest of the canonical (nodes, sorted edges) form."""
        if self._hash is None:
            text = "n:" + ",".join(map(str, self.nodes))
            text += ";e:" + ",".join(f"{u}-{v}" for u, v in self.sorted_edges())
            self._hash = hashlib.sha256(text.encode()).hexdigest()
        return self._hash

    def _check_node(self, v: int) -> None:
        if v not in self._adj:
            raise UnknownNodeError(f"unknown node {v}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- JSON wire format: {"nodes": [...], "edges": [[u, v], ...]} --

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [list(e) for e in self.sorted_edges()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        return cls(obj["nodes"], [tuple(e) for e in obj["edges"]])


def build_graph(nodes: Iterable[int], edges: Iterable[Edge]) -> Graph:
    """Build a validated graph; duplicate and reversed edge pairs collapse."""
    return Graph(nodes, edges)


def bfs_distances(g: Graph, source: int) -> Dict[int, int]:
    """Hop distances from ``source`` to every reachable node."""
    g._check_node(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def shortest_path_len(g: Graph, s: int, t: int) -> Optional[int]:
    """Hop count of a shortest s-t path; ``None`` when unreachable."""
    g._check_node(s)
    g._check_node(t)
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in dist:
                if w == t:
                    return dist[u] + 1
                dist[w] = dist[u] + 1
                queue.append(w)
    return None


def connected_components(g: Graph) -> List[List[int]]:
    seen = set()
    comps = []
    for v in g.nodes:
        if v in seen:
            continue
        comp = sorted(bfs_distances(g, v))
        seen.update(comp)
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(bfs_distances(g, g.nodes[0])) == g.n


def diameter(g: Graph) -> int:
    """Largest finite shortest-path length.

    For disconnected graphs this is the maximum eccentricity taken
    component-wise, so the result is always a finite integer.
    """
    if g.n == 0:
        raise EmptyGraphError("diameter of an empty graph is undefined")
    best = 0
    for v in g.nodes:
        dist = bfs_distances(g, v)
        best = max(best, max(dist.values()))
    return best


def linegraph(g: Graph) -> Tuple[Graph, Dict[int, Edge]]:
    """Linegraph L(G): one node per edge, adjacent iff the edges share
    an endpoint. Returns (L(G), node id -> original edge).
    """
    if g.m == 0:
        raise EmptyGraphError("linegraph of an edgeless graph is undefined")
    orig_edges = g.sorted_edges()
    provenance = dict(enumerate(orig_edges))
    index = {e: i for i, e in provenance.items()}

    lg_edges = set()
    for v in g.nodes:
        incident = [index[canonical_edge(v, w)] for w in g.neighbors(v)]
        for a, b in combinations(sorted(incident), 2):
            lg_edges.add((a, b))
    lg = Graph(range(len(orig_edges)), lg_edges)
    return lg, provenance
