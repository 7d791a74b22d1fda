"""Node-importance measures and the total ordering derived from them.

Three measures are supported: degree centrality, PageRank (edges treated
as bidirectional), and core number from iterative min-degree peeling.
Ties in the derived ordering are broken by a seeded random permutation so
reruns with the same seed reproduce the exact order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .graph import Graph
from .rng import derive_rng


class Method(str, enum.Enum):
    DEGREE = "degree"
    PAGERANK = "pagerank"
    CORE_NUMBER = "core_number"


@dataclass(frozen=True)
class PageRankParams:
    damping: float = 0.85
    tolerance: float = 1e-8  # L1 residual
    max_iterations: int = 100

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must be in (0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


def degree_centrality(g: Graph) -> Dict[int, int]:
    return {v: g.degree(v) for v in g.nodes}


def pagerank(g: Graph, params: PageRankParams = PageRankParams()) -> Dict[int, float]:
    """Iterative PageRank with uniform teleportation.

    Degree-0 nodes receive only the teleport term; the final vector is
    normalized so scores sum to 1 even when such nodes are present.
    """
    n = g.n
    if n == 0:
        return {}
    alpha = params.damping
    teleport = (1.0 - alpha) / n
    pr = {v: 1.0 / n for v in g.nodes}
    deg = {v: g.degree(v) for v in g.nodes}

    for _ in range(params.max_iterations):
        new = {}
        for v in g.nodes:
            incoming = sum(pr[u] / deg[u] for u in g.neighbors(v))
            new[v] = teleport + alpha * incoming
        residual = sum(abs(new[v] - pr[v]) for v in g.nodes)
        pr = new
        if residual <= params.tolerance:
            break

    total = sum(pr.values())
    return {v: s / total for v, s in pr.items()}


def core_numbers(g: Graph) -> Dict[int, int]:
    """Core number per node via min-degree peeling.

    Repeatedly remove a minimum-degree node; a node's core number is the
    running maximum of minimum degrees seen up to its removal.
    """
    deg = {v: g.degree(v) for v in g.nodes}
    alive = set(g.nodes)
    core: Dict[int, int] = {}
    current = 0
    # Bucket queue over degrees keeps this near O(n + m).
    max_deg = max(deg.values(), default=0)
    buckets: List[set] = [set() for _ in range(max_deg + 1)]
    for v, d in deg.items():
        buckets[d].add(v)

    lowest = 0
    for _ in range(g.n):
        while lowest <= max_deg and not buckets[lowest]:
            lowest += 1
        v = min(buckets[lowest])  # deterministic pick within the bucket
        buckets[lowest].remove(v)
        alive.discard(v)
        current = max(current, deg[v])
        core[v] = current
        for w in g.neighbors(v):
            if w in alive:
                buckets[deg[w]].remove(w)
                deg[w] -= 1
                buckets[deg[w]].add(w)
                lowest = min(lowest, deg[w])
    return core


_MEASURES = {
    Method.DEGREE: degree_centrality,
    Method.PAGERANK: pagerank,
    Method.CORE_NUMBER: core_numbers,
}


def compute_scores(g: Graph, method: Method) -> Dict[int, float]:
    return _MEASURES[Method(method)](g)


@dataclass(frozen=True)
class NodeRanking:
    """Total node order, descending by score with seeded tie-breaks."""

    method: Method
    scores: Dict[int, float] = field(compare=False)
    order: Tuple[int, ...] = ()
    seed: int = 0

    def position(self, v: int) -> int:
        return self.order.index(v)


def rank_nodes(g: Graph, method: Method, seed: int) -> NodeRanking:
    """Rank nodes by the given measure; equal scores are permuted by a
    deterministic RNG derived from (seed, graph hash, method)."""
    method = Method(method)
    scores = compute_scores(g, method)
    rng = derive_rng(seed, g.canonical_hash(), method.value, "ties")
    tie = {v: rng.random() for v in g.nodes}
    order = tuple(sorted(g.nodes, key=lambda v: (-scores[v], tie[v], v)))
    return NodeRanking(method=method, scores=scores, order=order, seed=seed)
