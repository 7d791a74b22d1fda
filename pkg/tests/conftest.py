import random

import pytest

from graphlin.graph import Graph

from hypothesis import strategies as st


def random_graph(rng: random.Random, n_min=2, n_max=12, p=0.35) -> Graph:
    """Erdos-Renyi style test graph; may be disconnected."""
    n = rng.randint(n_min, n_max)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Graph(range(n), edges)


def random_graph_with_edge(rng: random.Random, n_min=3, n_max=12, p=0.35) -> Graph:
    while True:
        g = random_graph(rng, n_min, n_max, p)
        if g.m >= 1:
            return g


@st.composite
def graphs(draw, n_min=1, n_max=10):
    n = draw(st.integers(n_min, n_max))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) \
        if pairs else []
    return Graph(range(n), edges)


@pytest.fixture(scope="session")
def graphwave_small():
    """Tiny motif dataset (2 graphs per combo) with tasks attached."""
    from graphlin.datasets import finalize_dataset
    from graphlin.generators import gen_graphwave

    records = gen_graphwave(11, graphs_per_combo=2)
    finalize_dataset(records, 11)
    return records


@pytest.fixture(scope="session")
def graphqa_small():
    from graphlin.datasets import finalize_dataset
    from graphlin.generators import gen_graphqa

    records = gen_graphqa(11, scale=0.04)
    finalize_dataset(records, 11)
    return records
