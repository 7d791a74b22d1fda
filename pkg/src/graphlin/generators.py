"""Synthetic benchmark graph generators.

Two families:

* a motif dataset: a cycle/chain base with clique, star, fan, diamond
  and tree motifs attached (30 shape combinations x 100 graphs = 3000);
* a generator-family dataset: Erdos-Renyi, Barabasi-Albert, scale-free,
  stochastic-block plus path/complete/star graphs (2300 graphs, 5-20
  nodes each).

Every graph records the edge order in which it was constructed
(``default_edge_order``) for the generator-default ordering ablation.
Per-graph RNG streams are derived from (dataset seed, index) so serial
and parallel generation agree.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .graph import Edge, Graph, canonical_edge
from .rng import derive_rng


class Shape(str, enum.Enum):
    CLIQUE = "clique"
    STAR = "star"
    FAN = "fan"
    DIAMOND = "diamond"
    TREE = "tree"


class UnknownShapeError(ValueError):
    pass


# Size constraints per shape: clique/fan/star 4-11 nodes, diamond fixed
# at 6, trees are perfect binary with 3-6 levels. Tree levels are drawn
# with geometric weights favoring shallow trees so dataset-level node
# and edge averages land near the reference means.
SHAPE_SIZE_RANGE = (4, 11)
DIAMOND_NODES = 6
TREE_LEVELS = (3, 4, 5, 6)
TREE_LEVEL_WEIGHTS = (8, 4, 2, 1)


def _clique(size: int) -> Tuple[int, List[Edge]]:
    edges = [(i, j) for i, j in combinations(range(size), 2)]
    return size, edges


def _star(size: int) -> Tuple[int, List[Edge]]:
    return size, [(0, i) for i in range(1, size)]


def _fan(size: int) -> Tuple[int, List[Edge]]:
    # Apex node 0 joined to every node of a path on size-1 nodes.
    path = [(i, i + 1) for i in range(1, size - 1)]
    apex = [(0, i) for i in range(1, size)]
    return size, path + apex


def _diamond(size: int) -> Tuple[int, List[Edge]]:
    # Fixed 6-node shape: 4-cycle (0,1,2,3) plus nodes 4 and 5 each
    # adjacent to all four cycle nodes.
    cycle = [(0, 1), (1, 2), (2, 3), (0, 3)]
    hubs = [(4, i) for i in range(4)] + [(5, i) for i in range(4)]
    return DIAMOND_NODES, cycle + hubs


def _tree(levels: int) -> Tuple[int, List[Edge]]:
    size = 2 ** levels - 1
    edges = [((i - 1) // 2, i) for i in range(1, size)]
    return size, edges


def motif_catalog() -> Dict[Shape, Callable[[int], Tuple[int, List[Edge]]]]:
    """Shape kind -> constructor returning (node count, local edge order)."""
    return {Shape.CLIQUE: _clique, Shape.STAR: _star, Shape.FAN: _fan,
            Shape.DIAMOND: _diamond, Shape.TREE: _tree}


def build_motif(shape: Shape, rng: random.Random) -> Tuple[int, List[Edge]]:
    catalog = motif_catalog()
    if shape not in catalog:
        raise UnknownShapeError(str(shape))
    if shape is Shape.DIAMOND:
        param = DIAMOND_NODES
    elif shape is Shape.TREE:
        param = rng.choices(TREE_LEVELS, weights=TREE_LEVEL_WEIGHTS)[0]
    else:
        param = rng.randint(*SHAPE_SIZE_RANGE)
    return catalog[shape](param)


@dataclass
class GraphRecord:
    """One dataset entry: the graph plus its provenance and fixed tasks."""

    id: str
    index: int
    graph: Graph
    source: dict
    default_edge_order: List[Edge]
    motif_shapes: Set[Shape] = field(default_factory=set)
    one_shot_exemplar: bool = False
    tasks: dict = field(default_factory=dict)  # kind value -> TaskInstance

    def to_json(self) -> dict:
        obj = {
            "id": self.id,
            "index": self.index,
            "graph": self.graph.to_json(),
            "source": self.source,
            "default_edge_order": [list(e) for e in self.default_edge_order],
            "motif_shapes": sorted(s.value for s in self.motif_shapes),
            "one_shot_exemplar": self.one_shot_exemplar,
        }
        if self.tasks:
            obj["tasks"] = {k: t.to_json() for k, t in self.tasks.items()}
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "GraphRecord":
        from .tasks import TaskInstance  # avoid import cycle at module load

        return cls(
            id=obj["id"],
            index=obj["index"],
            graph=Graph.from_json(obj["graph"]),
            source=obj["source"],
            default_edge_order=[tuple(e) for e in obj["default_edge_order"]],
            motif_shapes={Shape(s) for s in obj.get("motif_shapes", [])},
            one_shot_exemplar=bool(obj.get("one_shot_exemplar", False)),
            tasks={k: TaskInstance.from_json(t)
                   for k, t in obj.get("tasks", {}).items()},
        )


def shape_combinations() -> List[Tuple[Shape, ...]]:
    """The 30 motif combinations: 5 singletons, 15 pairs with repetition,
    10 distinct triplets."""
    shapes = list(Shape)
    combos: List[Tuple[Shape, ...]] = [(s,) for s in shapes]
    combos += list(combinations_with_replacement(shapes, 2))
    combos += list(combinations(shapes, 3))
    return combos


BASE_SIZE_RANGE = (3, 21)


def _gen_motif_graph(combo: Tuple[Shape, ...], rng: random.Random) -> Tuple[Graph, List[Edge]]:
    n_base = rng.randint(*BASE_SIZE_RANGE)
    base_kind = rng.choice(["cycle", "chain"])
    order: List[Edge] = [(i, i + 1) for i in range(n_base - 1)]
    if base_kind == "cycle" and n_base > 2:
        order.append((n_base - 1, 0))

    total = n_base
    for shape in combo:
        size, local_edges = build_motif(shape, rng)
        offset = total
        order.extend((u + offset, v + offset) for u, v in local_edges)
        anchor = rng.randrange(n_base)
        order.append((anchor, offset))  # bridge to the motif's node 0
        total += size

    g = Graph(range(total), order)
    return g, order


def gen_graphwave(seed: int, graphs_per_combo: int = 100) -> List[GraphRecord]:
    """Motif dataset: every shape combination x ``graphs_per_combo``."""
    records = []
    index = 0
    for ci, combo in enumerate(shape_combinations()):
        for gi in range(graphs_per_combo):
            rng = derive_rng(seed, "graphwave", ci, gi)
            g, order = _gen_motif_graph(combo, rng)
            records.append(GraphRecord(
                id=f"graphwave-{index:05d}",
                index=index,
                graph=g,
                source={"generator": "graphwave",
                        "combo": [s.value for s in combo]},
                default_edge_order=order,
                motif_shapes=set(combo),
            ))
            index += 1
    return records


GRAPHQA_SIZE_RANGE = (5, 20)


def _gen_er(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    while True:
        n = rng.randint(*GRAPHQA_SIZE_RANGE)
        p = rng.uniform(0.2, 0.6)
        order = [(i, j) for i, j in combinations(range(n), 2) if rng.random() < p]
        if order:
            return Graph(range(n), order), order, {"n": n, "p": round(p, 4)}


def _preferential_pick(rng: random.Random, repeated: List[int],
                       exclude: Set[int]) -> Optional[int]:
    candidates = [x for x in repeated if x not in exclude]
    return rng.choice(candidates) if candidates else None


def _gen_ba(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    n = rng.randint(*GRAPHQA_SIZE_RANGE)
    m_a = rng.choice([1, 2, 3])
    order: List[Edge] = []
    repeated: List[int] = list(range(m_a))  # seed nodes, degree-0 but pickable
    for v in range(m_a, n):
        targets: Set[int] = set()
        while len(targets) < min(m_a, v):
            t = _preferential_pick(rng, repeated, targets | {v})
            targets.add(t)
        for t in sorted(targets):
            order.append((t, v))
            repeated += [t, v]
    return Graph(range(n), order), order, {"n": n, "m": m_a}


def _gen_sfn(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    # Preferential-attachment growth from a triangle, with occasional
    # extra preferential edges; an undirected scale-free-ish network.
    n = rng.randint(*GRAPHQA_SIZE_RANGE)
    order: List[Edge] = [(0, 1), (1, 2), (0, 2)]
    repeated = [0, 0, 1, 1, 2, 2]
    present = {canonical_edge(*e) for e in order}
    for v in range(3, n):
        t = _preferential_pick(rng, repeated, {v})
        order.append((t, v))
        present.add(canonical_edge(t, v))
        repeated += [t, v]
        if rng.random() < 0.3:
            extra = _preferential_pick(rng, repeated, {v, t})
            if extra is not None and canonical_edge(extra, v) not in present:
                order.append((extra, v))
                present.add(canonical_edge(extra, v))
                repeated += [extra, v]
    return Graph(range(n), order), order, {"n": n}


def _gen_sbm(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    while True:
        n = rng.randint(*GRAPHQA_SIZE_RANGE)
        k = rng.choice([2, 3])
        cuts = sorted(rng.sample(range(1, n), k - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [n])]
        if min(sizes) < 2:
            continue
        member = []
        for b, s in enumerate(sizes):
            member += [b] * s
        order = []
        for i, j in combinations(range(n), 2):
            p = 0.6 if member[i] == member[j] else 0.1
            if rng.random() < p:
                order.append((i, j))
        g = Graph(range(n), order)
        if order and all(g.degree(v) > 0 for v in g.nodes):
            return g, order, {"n": n, "blocks": sizes}


def _gen_path(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    n = rng.randint(*GRAPHQA_SIZE_RANGE)
    order = [(i, i + 1) for i in range(n - 1)]
    return Graph(range(n), order), order, {"n": n}


def _gen_complete(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    n = rng.randint(*GRAPHQA_SIZE_RANGE)
    order = list(combinations(range(n), 2))
    return Graph(range(n), order), order, {"n": n}


def _gen_star(rng: random.Random) -> Tuple[Graph, List[Edge], dict]:
    n = rng.randint(*GRAPHQA_SIZE_RANGE)
    order = [(0, i) for i in range(1, n)]
    return Graph(range(n), order), order, {"n": n}


GRAPHQA_FAMILIES: List[Tuple[str, Callable, int]] = [
    ("er", _gen_er, 500),
    ("ba", _gen_ba, 500),
    ("sfn", _gen_sfn, 500),
    ("sbm", _gen_sbm, 500),
    ("path", _gen_path, 100),
    ("complete", _gen_complete, 100),
    ("star", _gen_star, 100),
]


def gen_graphqa(seed: int, scale: float = 1.0) -> List[GraphRecord]:
    """Generator-family dataset; ``scale`` shrinks per-family counts for
    quick runs (counts are rounded up to at least 1)."""
    records = []
    index = 0
    for tag, fn, count in GRAPHQA_FAMILIES:
        count = max(1, round(count * scale))
        for gi in range(count):
            rng = derive_rng(seed, "graphqa", tag, gi)
            g, order, params = fn(rng)
            records.append(GraphRecord(
                id=f"graphqa-{index:05d}",
                index=index,
                graph=g,
                source={"generator": tag, "params": params},
                default_edge_order=order,
            ))
            index += 1
    return records
