"""Small graph builders shared across the test modules."""

from __future__ import annotations

import numpy as np

from harmonic_influence import (
    RANDOM_TREE,
    GeneratorSpec,
    WeightedGraph,
    generate,
    is_connected,
)


def line_graph(n_nodes: int, conductance: float = 1.0) -> WeightedGraph:
    return WeightedGraph(n_nodes, [(i, i + 1, conductance) for i in range(n_nodes - 1)])


def star_graph(n_nodes: int) -> WeightedGraph:
    return WeightedGraph(n_nodes, [(0, i) for i in range(1, n_nodes)])


def cycle_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> WeightedGraph:
    return WeightedGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def circulant_graph(n: int, offsets: tuple[int, ...]) -> WeightedGraph:
    edges = set()
    for d in offsets:
        for i in range(n):
            j = (i + d) % n
            edges.add((min(i, j), max(i, j)))
    return WeightedGraph(n, sorted(edges))


def petersen_graph() -> WeightedGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return WeightedGraph(10, outer + inner + spokes)


def cube_graph() -> WeightedGraph:
    edges = []
    for u in range(8):
        for bit in range(3):
            v = u ^ (1 << bit)
            if u < v:
                edges.append((u, v))
    return WeightedGraph(8, edges)


def random_tree(n: int, seed: int) -> WeightedGraph:
    return generate(GeneratorSpec(kind=RANDOM_TREE, n=n, seed=seed))


def random_weighted_tree(n: int, seed: int, lo: float = 0.1, hi: float = 10.0) -> WeightedGraph:
    base = random_tree(n, seed)
    rng = np.random.default_rng(seed + 10_007)
    edges = [(u, v, float(rng.uniform(lo, hi))) for u, v, _ in base.edge_list()]
    return WeightedGraph(n, edges)


def random_regular_graph(n: int, d: int, seed: int) -> WeightedGraph:
    """Connected simple d-regular graph via the pairing model with retries."""
    if (n * d) % 2 != 0:
        raise ValueError("n * d must be even")
    rng = np.random.default_rng(seed)
    for _ in range(100_000):
        stubs = np.repeat(np.arange(n), d)
        rng.shuffle(stubs)
        edges: set[tuple[int, int]] = set()
        ok = True
        for u, v in stubs.reshape(-1, 2):
            u, v = int(u), int(v)
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if ok:
            graph = WeightedGraph(n, sorted(edges))
            if is_connected(graph):
                return graph
    raise RuntimeError(f"no connected simple {d}-regular graph found for n={n}")


def random_zero_set(rng: np.random.Generator, n: int, max_size: int | None = None) -> set[int]:
    """Nonempty anchored set leaving at least one free node."""
    cap = max_size if max_size is not None else max(1, n - 1)
    cap = min(cap, n - 1) if n > 1 else 1
    size = int(rng.integers(1, cap + 1))
    return {int(i) for i in rng.choice(n, size=size, replace=False)}


def leaves_of(graph: WeightedGraph) -> list[int]:
    return [i for i in graph.nodes() if graph.degree(i) == 1]
