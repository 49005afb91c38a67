import numpy as np
import pytest

from cove.graph import Graph, from_edges


def make_graph(edge_weights: dict, n: int | None = None) -> Graph:
    """Graph from {(u, v): w} with dense integer ids; n pads isolated nodes."""
    nodes = {v for e in edge_weights for v in e}
    count = max(nodes) + 1 if nodes else 0
    if n is not None:
        count = max(count, n)
    return from_edges(
        {(min(u, v), max(u, v)): w for (u, v), w in edge_weights.items()},
        [str(i) for i in range(count)],
    )


def k3() -> Graph:
    return make_graph({(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0})


def path(n: int) -> Graph:
    return make_graph({(i, i + 1): 1.0 for i in range(n - 1)})


def random_connected_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi conditioned on connectivity (rejection)."""
    from cove.graph import connected_components

    rng = np.random.default_rng(seed)
    while True:
        edges = {
            (u, v): 1.0
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        }
        g = make_graph(edges, n=n)
        if g.total_edges and connected_components(g).max() == 0:
            return g


def random_regular_connected(n: int, d: int, seed: int) -> Graph:
    """Uniform d-regular simple connected graph via rejection stub matching."""
    from cove.graph import connected_components

    rng = np.random.default_rng(seed)
    while True:
        stubs = np.repeat(np.arange(n), d)
        stubs = stubs[rng.permutation(len(stubs))].reshape(-1, 2)
        edges = {}
        ok = True
        for a, b in stubs:
            if a == b:
                ok = False
                break
            key = (min(int(a), int(b)), max(int(a), int(b)))
            if key in edges:
                ok = False
                break
            edges[key] = 1.0
        if not ok:
            continue
        g = make_graph(edges, n=n)
        if connected_components(g).max() == 0:
            return g


@pytest.fixture
def triangle():
    return k3()
