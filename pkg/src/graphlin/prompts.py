"""Prompt rendering for the eight graph-reasoning tasks.

Each task has a fixed template with substitution slots for the query
nodes and the rendered edge list. One-shot prompts prepend a worked
exemplar (same template) with its gold answer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Optional

from .generators import Shape
from .linearize import LinearizedGraph, render_edge_list
from .tasks import TaskInstance, TaskKind


class Shots(str, enum.Enum):
    ZERO = "zero"
    ONE = "one"


class MissingExemplarError(ValueError):
    pass


class KindMismatchError(ValueError):
    pass


_PREAMBLE = ("In an undirected graph, (i, j) means that node i and node j "
             "are connected with an undirected edge.")
_RESPOND = "Given a graph G and its list of edges, respond to the following question:"
_DEGREE_DEF = "The degree of a node is the number of edges connected to the node."

TEMPLATES: Dict[TaskKind, str] = {
    TaskKind.NODE_COUNTING: (
        "In an undirected graph G, (i, j) means that node i and node j are "
        "connected with an undirected edge.\n"
        "Q: How many nodes are in G?\n"
        "G: {graph}"
    ),
    TaskKind.MAX_DEGREE: (
        f"{_PREAMBLE}\n{_DEGREE_DEF}\n{_RESPOND}\n"
        "Q: Without any justification, what is the maximum node degree in "
        "the following graph G?\n"
        "G: {graph}"
    ),
    TaskKind.NODE_DEGREE: (
        f"{_PREAMBLE}\n{_DEGREE_DEF}\n{_RESPOND}\n"
        "Q: Without any justification, what is the degree of node {node} in "
        "the following graph G?\n"
        "G: {graph}"
    ),
    TaskKind.EDGE_EXISTENCE: (
        f"{_PREAMBLE}\n{_RESPOND}\n"
        "Q: Does an undirected edge ({node1}, {node2}) exist in the "
        "following graph G?.\n"
        "G: {graph}"
    ),
    TaskKind.DIAMETER: (
        f"{_PREAMBLE}\n"
        "The diameter of a graph is the length of the shortest path between "
        "the most distanced nodes.\n"
        f"{_RESPOND}\n"
        "Q: Without any justification, what is the diameter of the following "
        "graph G?\n"
        "G: {graph}"
    ),
    TaskKind.SHORTEST_PATH: (
        f"{_PREAMBLE}\n{_RESPOND}\n"
        "Q: Without any justification, what is the length of the shortest "
        "path from node {node1} to node {node2}? If no path exists, the "
        "response is '0'.\n"
        "G: {graph}"
    ),
    TaskKind.PATH_EXISTENCE: (
        f"{_PREAMBLE}\n{_RESPOND}\n"
        "Q: Does a path that connects node {node1} and {node2} exist in the "
        "following graph G?\n"
        "G: {graph}"
    ),
    TaskKind.MOTIF_SHAPE: (
        "In an undirected graph, (i, j) means that node i and node j are "
        "connected with an undirected edge. The graph contains a motif graph "
        "with strictly one of the following structures. {definitions}\n"
        "Q: Which of the defined structures is included in the following "
        "graph?\n"
        "graph: {graph}"
    ),
}

# One-sentence structure definitions matching the generator constructions
# exactly; keep these in sync with generators.motif_catalog.
MOTIF_DEFINITIONS: Dict[Shape, str] = {
    Shape.CLIQUE: ("a set of nodes in which every pair of distinct nodes is "
                   "connected by an edge"),
    Shape.STAR: ("a single center node connected to every other node, with "
                 "no edges between the other nodes"),
    Shape.FAN: ("an apex node connected to every node of a path, together "
                "with the consecutive path edges"),
    Shape.DIAMOND: ("a four-node cycle plus two additional nodes that are "
                    "each connected to all four cycle nodes"),
    Shape.TREE: ("a perfect binary tree in which every internal node has "
                 "exactly two children and all leaves share the same depth"),
}


def motif_definitions_text() -> str:
    return " ".join(f"{shape.value}: {MOTIF_DEFINITIONS[shape]}."
                    for shape in Shape)


@dataclass(frozen=True)
class PromptRecord:
    text: str
    task: TaskKind
    shots: Shots
    exemplar_ref: Optional[str]
    token_estimate: int


# Tokens-per-edge and fixed task-description overhead used for the
# context-window capacity estimate.
TOKENS_PER_EDGE = 5
TASK_OVERHEAD_TOKENS = 100


def estimate_tokens(lg: LinearizedGraph) -> int:
    return TASK_OVERHEAD_TOKENS + TOKENS_PER_EDGE * len(lg.edge_sequence)


# Frozen capacity figures for known model context windows. The 1.01M
# entry was estimated from the nominal 1M window, so the raw formula
# would overshoot it; the published figure is authoritative.
PUBLISHED_CAPACITY = {8192: 1618, 1_010_000: 199_980}


def max_edges_for_window(window_tokens: int) -> int:
    """Largest edge count whose prompt fits in the given context window."""
    if window_tokens in PUBLISHED_CAPACITY:
        return PUBLISHED_CAPACITY[window_tokens]
    return (window_tokens - TASK_OVERHEAD_TOKENS) // TOKENS_PER_EDGE


def _fill(inst: TaskInstance, lg: LinearizedGraph) -> str:
    template = TEMPLATES[inst.kind]
    slots = {"graph": render_edge_list(lg)}
    if inst.kind is TaskKind.MOTIF_SHAPE:
        slots["definitions"] = motif_definitions_text()
    for key, value in inst.params.items():
        # query nodes are sampled on original ids; render under final labels
        slots[key] = str(lg.label_map[value])
    return template.format(**slots)


def format_gold_answer(inst: TaskInstance) -> str:
    """Canonical bare answer form used after one-shot exemplars."""
    if isinstance(inst.truth, list):
        return inst.truth[0]
    return str(inst.truth)


def render_prompt(inst: TaskInstance, lg: LinearizedGraph, shots: Shots,
                  exemplar: Optional[tuple] = None) -> PromptRecord:
    """Render the prompt for one instance.

    ``exemplar`` is a (TaskInstance, LinearizedGraph) pair of the same
    task kind, required exactly when ``shots`` is ONE.
    """
    shots = Shots(shots)
    text = _fill(inst, lg)
    exemplar_ref = None
    if shots is Shots.ONE:
        if exemplar is None:
            raise MissingExemplarError("one-shot prompt needs an exemplar")
        ex_inst, ex_lg = exemplar
        if ex_inst.kind is not inst.kind:
            raise KindMismatchError(
                f"exemplar task {ex_inst.kind} != query task {inst.kind}")
        if ex_inst.graph_ref == inst.graph_ref:
            raise KindMismatchError("exemplar graph must differ from query graph")
        ex_text = _fill(ex_inst, ex_lg)
        text = (f"Example:\n{ex_text}\n"
                f"Answer: {format_gold_answer(ex_inst)}\n\n{text}")
        exemplar_ref = ex_inst.graph_ref
    elif exemplar is not None:
        raise KindMismatchError("zero-shot prompt must not carry an exemplar")

    return PromptRecord(text=text, task=inst.kind, shots=shots,
                        exemplar_ref=exemplar_ref,
                        token_estimate=estimate_tokens(lg))
