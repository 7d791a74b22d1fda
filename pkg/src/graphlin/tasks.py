"""Task instances: per-task query parameters and ground-truth answers.

Instances are fixed at dataset-generation time so every linearization
method answers the identical question per graph. Existence-style tasks
aim for a 50/50 positive/negative balance; when a graph cannot supply
the desired sign (complete graph, connected graph), the instance is
forced positive and flagged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from .generators import GraphRecord, Shape
from .graph import Graph, bfs_distances, diameter, shortest_path_len
from .rng import derive_rng


class TaskKind(str, enum.Enum):
    NODE_COUNTING = "node_counting"
    MAX_DEGREE = "max_degree"
    NODE_DEGREE = "node_degree"
    EDGE_EXISTENCE = "edge_existence"
    DIAMETER = "diameter"
    SHORTEST_PATH = "shortest_path"
    PATH_EXISTENCE = "path_existence"
    MOTIF_SHAPE = "motif_shape"


NUMERIC_TASKS = frozenset({TaskKind.NODE_COUNTING, TaskKind.MAX_DEGREE,
                           TaskKind.NODE_DEGREE, TaskKind.DIAMETER,
                           TaskKind.SHORTEST_PATH})
EXISTENCE_TASKS = frozenset({TaskKind.EDGE_EXISTENCE, TaskKind.PATH_EXISTENCE})


class InvalidKindForSourceError(ValueError):
    pass


Truth = Union[int, str, List[str]]


@dataclass
class TaskInstance:
    graph_ref: str
    kind: TaskKind
    params: Dict[str, int] = field(default_factory=dict)
    truth: Truth = 0
    forced_positive: bool = False

    def truth_set(self) -> set:
        """Accepted answers (MotifShape accepts any present shape)."""
        if isinstance(self.truth, list):
            return set(self.truth)
        return {self.truth}

    def to_json(self) -> dict:
        return {"graph_ref": self.graph_ref, "kind": self.kind.value,
                "params": self.params, "truth": self.truth,
                "forced_positive": self.forced_positive}

    @classmethod
    def from_json(cls, obj: dict) -> "TaskInstance":
        return cls(graph_ref=obj["graph_ref"], kind=TaskKind(obj["kind"]),
                   params=dict(obj.get("params", {})), truth=obj["truth"],
                   forced_positive=bool(obj.get("forced_positive", False)))


def applicable_kinds(rec: GraphRecord) -> List[TaskKind]:
    kinds = [k for k in TaskKind if k is not TaskKind.MOTIF_SHAPE]
    if rec.motif_shapes:
        kinds.append(TaskKind.MOTIF_SHAPE)
    return kinds


def _sample_pair(g: Graph, rng, want_positive: bool, adjacent: bool):
    """Pick a node pair with the desired edge/path sign; returns
    ((u, v), forced) where forced means the sign could not be honored."""
    nodes = list(g.nodes)
    if adjacent:
        is_positive = g.has_edge
        negatives_exist = g.m < g.n * (g.n - 1) // 2
    else:
        comp_of = {}
        for v in nodes:
            if v not in comp_of:
                for w in bfs_distances(g, v):
                    comp_of[w] = v
        is_positive = lambda a, b: comp_of[a] == comp_of[b]
        negatives_exist = len(set(comp_of.values())) > 1

    # "forced" marks graphs that cannot supply a negative at all, so the
    # instance is excluded from positive/negative balance accounting even
    # when the coin happened to ask for a positive anyway.
    forced = not negatives_exist
    if forced:
        want_positive = True

    if want_positive and adjacent:
        u, v = rng.choice(g.sorted_edges())
        if rng.random() < 0.5:
            u, v = v, u
        return (u, v), forced

    while True:
        u, v = rng.sample(nodes, 2)
        if is_positive(u, v) == want_positive:
            return (u, v), forced


def make_instance(rec: GraphRecord, kind: TaskKind, seed: int) -> TaskInstance:
    kind = TaskKind(kind)
    if kind is TaskKind.MOTIF_SHAPE and not rec.motif_shapes:
        raise InvalidKindForSourceError("motif task needs a motif-sourced record")
    g = rec.graph
    rng = derive_rng(seed, "task", rec.id, kind.value)
    inst = TaskInstance(graph_ref=rec.id, kind=kind)

    if kind is TaskKind.NODE_COUNTING:
        inst.truth = g.n
    elif kind is TaskKind.MAX_DEGREE:
        inst.truth = max(g.degree(v) for v in g.nodes)
    elif kind is TaskKind.NODE_DEGREE:
        v = rng.choice(list(g.nodes))
        inst.params = {"node": v}
        inst.truth = g.degree(v)
    elif kind is TaskKind.DIAMETER:
        inst.truth = diameter(g)
    elif kind is TaskKind.SHORTEST_PATH:
        u, v = rng.sample(list(g.nodes), 2)
        inst.params = {"node1": u, "node2": v}
        d = shortest_path_len(g, u, v)
        inst.truth = 0 if d is None else d
    elif kind in EXISTENCE_TASKS:
        want_positive = rng.random() < 0.5
        pair, forced = _sample_pair(
            g, rng, want_positive, adjacent=(kind is TaskKind.EDGE_EXISTENCE))
        u, v = pair
        inst.params = {"node1": u, "node2": v}
        if kind is TaskKind.EDGE_EXISTENCE:
            positive = g.has_edge(u, v)
        else:
            positive = shortest_path_len(g, u, v) is not None
        inst.truth = "yes" if positive else "no"
        inst.forced_positive = forced
    elif kind is TaskKind.MOTIF_SHAPE:
        inst.truth = sorted(s.value for s in rec.motif_shapes)
    return inst


def _recompute_truth(inst: TaskInstance, g: Graph,
                     motif_shapes=None) -> Truth:
    kind = inst.kind
    if kind is TaskKind.NODE_COUNTING:
        return g.n
    if kind is TaskKind.MAX_DEGREE:
        return max(g.degree(v) for v in g.nodes)
    if kind is TaskKind.NODE_DEGREE:
        return g.degree(inst.params["node"])
    if kind is TaskKind.DIAMETER:
        return diameter(g)
    if kind is TaskKind.SHORTEST_PATH:
        d = shortest_path_len(g, inst.params["node1"], inst.params["node2"])
        return 0 if d is None else d
    if kind is TaskKind.EDGE_EXISTENCE:
        return "yes" if g.has_edge(inst.params["node1"], inst.params["node2"]) else "no"
    if kind is TaskKind.PATH_EXISTENCE:
        d = shortest_path_len(g, inst.params["node1"], inst.params["node2"])
        return "yes" if d is not None else "no"
    if kind is TaskKind.MOTIF_SHAPE:
        return sorted(s.value for s in (motif_shapes or set()))
    raise ValueError(kind)


def verify_instance(inst: TaskInstance, g: Graph, motif_shapes=None) -> bool:
    """Recompute the truth from scratch and compare; dataset self-check."""
    return _recompute_truth(inst, g, motif_shapes) == inst.truth


def attach_instances(records: List[GraphRecord], seed: int) -> None:
    """Populate ``rec.tasks`` for every record, in place."""
    for rec in records:
        for kind in applicable_kinds(rec):
            rec.tasks[kind.value] = make_instance(rec, kind, seed)
