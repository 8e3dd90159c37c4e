"""Random graph generators, baseline centralities, and error metrics.

Everything here is deterministic given the generator seed.  The error
metrics compare an estimated influence profile against the exact one over
the free nodes only (anchored nodes have no defined influence): the mean
absolute deviation, and the mean displacement between the two descending
rankings with ties broken toward smaller node ids.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    InvalidSpecError,
    NoConvergenceError,
)
from .exact import DENSE_NODE_LIMIT, StoppingReason, argmax_smallest_id, hic_all_exact
from .general_mpa import StoppingRule, run_general_mpa
from .graph import WeightedGraph, is_connected

logger = logging.getLogger(__name__)

ERDOS_RENYI = "erdos-renyi"
WATTS_STROGATZ = "watts-strogatz"
RANDOM_TREE = "random-tree"
LINE = "line"
STAR = "star"

EIGEN_TOL = 1e-10
EIGEN_MAX_ITERS = 10_000

_MAX_CONNECT_ATTEMPTS = 10_000


@dataclass(frozen=True)
class GeneratorSpec:
    """Which random family to draw from, its parameters, and the seed."""

    kind: str
    n: int
    p: float | None = None
    k: int | None = None
    beta: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSpecError(f"n must be at least 1, got {self.n}")
        if self.seed < 0:
            raise InvalidSpecError(f"seed must be nonnegative, got {self.seed}")
        if self.kind == ERDOS_RENYI:
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise InvalidSpecError(f"edge probability must be in [0, 1], got {self.p}")
        elif self.kind == WATTS_STROGATZ:
            if self.k is None or self.k % 2 != 0 or not 0 <= self.k < self.n:
                raise InvalidSpecError(
                    f"ring degree must be even and below n, got k={self.k}"
                )
            if self.beta is None or not 0.0 <= self.beta <= 1.0:
                raise InvalidSpecError(f"rewiring probability must be in [0, 1], got {self.beta}")
        elif self.kind in (RANDOM_TREE, LINE, STAR):
            pass
        else:
            raise InvalidSpecError(f"unknown generator kind {self.kind!r}")


def _erdos_renyi_once(n: int, p: float, seed: int) -> WeightedGraph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return WeightedGraph(n, [(int(u), int(v)) for u, v in zip(iu[mask], ju[mask])])


def _watts_strogatz_once(n: int, k: int, beta: float, seed: int) -> WeightedGraph:
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    for d in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + d) % n
            edges.add((min(i, j), max(i, j)))
    # Rewire the far endpoint of each ring edge in construction order,
    # avoiding self-loops and duplicates.
    for d in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + d) % n
            key = (min(i, j), max(i, j))
            if key not in edges or rng.random() >= beta:
                continue
            candidates = [
                x for x in range(n)
                if x != i and (min(i, x), max(i, x)) not in edges
            ]
            if not candidates:
                continue
            new = candidates[int(rng.integers(0, len(candidates)))]
            edges.remove(key)
            edges.add((min(i, new), max(i, new)))
    return WeightedGraph(n, sorted(edges))


def _random_tree(n: int, seed: int) -> WeightedGraph:
    """Uniform labeled tree by decoding a random node sequence."""
    if n == 1:
        return WeightedGraph(1, [])
    if n == 2:
        return WeightedGraph(2, [(0, 1)])
    rng = np.random.default_rng(seed)
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    import heapq

    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return WeightedGraph(n, edges)


def generate(spec: GeneratorSpec) -> WeightedGraph:
    """Draw a unit-conductance graph; random families retry with an
    incremented seed until the sample is connected."""
    if spec.kind == LINE:
        return WeightedGraph(spec.n, [(i, i + 1) for i in range(spec.n - 1)])
    if spec.kind == STAR:
        return WeightedGraph(spec.n, [(0, i) for i in range(1, spec.n)])
    if spec.kind == RANDOM_TREE:
        return _random_tree(spec.n, spec.seed)

    for attempt in range(_MAX_CONNECT_ATTEMPTS):
        seed = spec.seed + attempt
        if spec.kind == ERDOS_RENYI:
            graph = _erdos_renyi_once(spec.n, spec.p, seed)
        else:
            graph = _watts_strogatz_once(spec.n, spec.k, spec.beta, seed)
        if is_connected(graph):
            if attempt:
                logger.info("%s(n=%d): %d regeneration(s) before a connected sample",
                            spec.kind, spec.n, attempt)
            return graph
    raise InvalidSpecError(
        f"no connected sample of {spec.kind}(n={spec.n}) within "
        f"{_MAX_CONNECT_ATTEMPTS} attempts"
    )


def degree_centrality(graph: WeightedGraph) -> np.ndarray:
    """Neighbor count per node."""
    return np.array([float(graph.degree(i)) for i in graph.nodes()])


def eigenvector_centrality(graph: WeightedGraph) -> np.ndarray:
    """Principal eigenvector of the conductance matrix, unit maximum.

    Power iteration on the half-shifted operator ``C + 0.5 I``: the shift
    leaves the principal eigenvector unchanged while breaking the period-2
    oscillation of bipartite graphs.
    """
    if not is_connected(graph):
        raise DisconnectedGraphError("eigenvector centrality requires a connected graph")
    n = graph.node_count
    M = 0.5 * np.eye(n)
    for u, v, c in graph.edge_list():
        M[u, v] += c
        M[v, u] += c
    v = np.ones(n)
    for _ in range(EIGEN_MAX_ITERS):
        nxt = M @ v
        nxt /= nxt.max()
        if np.abs(nxt - v).max() <= EIGEN_TOL:
            return nxt
        v = nxt
    raise NoConvergenceError("power iteration hit its cap")


def _values_over(data, regular: Sequence[int]) -> np.ndarray:
    if isinstance(data, Mapping):
        try:
            return np.array([float(data[i]) for i in regular])
        except KeyError as exc:
            raise DimensionMismatchError(f"no value for node {exc.args[0]}") from exc
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 1 or (regular and max(regular) >= arr.shape[0]):
        raise DimensionMismatchError("per-node vector does not cover the free nodes")
    return arr[list(regular)]


def mean_deviation_error(exact, estimate, regular: Sequence[int]) -> float:
    """Mean absolute difference over the free nodes."""
    a = _values_over(exact, regular)
    b = _values_over(estimate, regular)
    if a.shape[0] == 0:
        return 0.0
    return float(np.abs(a - b).mean())


def _rank_positions(values: np.ndarray, regular: Sequence[int]) -> dict[int, int]:
    order = sorted(range(len(regular)), key=lambda idx: (-values[idx], regular[idx]))
    return {regular[idx]: pos for pos, idx in enumerate(order)}


def mean_rank_error(exact, estimate, regular: Sequence[int]) -> float:
    """Mean displacement between the two descending rankings.

    Positions come from sorting by value descending, ties broken toward
    the smaller node id; zero iff the rankings coincide.
    """
    a = _values_over(exact, regular)
    b = _values_over(estimate, regular)
    if a.shape[0] == 0:
        return 0.0
    ra = _rank_positions(a, regular)
    rb = _rank_positions(b, regular)
    return float(np.mean([abs(ra[i] - rb[i]) for i in regular]))


@dataclass(frozen=True)
class ErrorReport:
    """Per-round errors of an iterative run against the exact profile."""

    e_dev: tuple[float, ...]
    e_rank: tuple[float, ...]
    rounds: int
    stopping_reason: StoppingReason
    exact_argmax: int | None
    estimated_argmax: tuple[int, ...]
    degree_rank_error: float
    eigen_rank_error: float
    regular: tuple[int, ...]

    def write_csv(self, target) -> None:
        lines = ["t,e_dev,e_rank"]
        for t in range(1, self.rounds + 1):
            lines.append(f"{t},{self.e_dev[t - 1]:.12g},{self.e_rank[t - 1]:.12g}")
        text = "\n".join(lines) + "\n"
        if isinstance(target, str):
            with open(target, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            target.write(text)

    def summary(self) -> dict:
        return {
            "exact_argmax": self.exact_argmax,
            "mpa_argmax": self.estimated_argmax[-1] if self.estimated_argmax else None,
            "degree_rank_error": self.degree_rank_error,
            "eigen_rank_error": self.eigen_rank_error,
            "rounds": self.rounds,
            "stopping_reason": self.stopping_reason.value,
        }


def compare_run(
    graph: WeightedGraph,
    zero_set: Iterable[int],
    rule: StoppingRule | None = None,
) -> ErrorReport:
    """Exact profile once, iterative run once, errors per round.

    Also ranks the degree and eigenvector baselines against the exact
    profile, over the same free node set.
    """
    zeros = {int(i) for i in zero_set}
    exact = hic_all_exact(graph, zeros)
    regular = tuple(sorted(exact.hic))
    if len(regular) > DENSE_NODE_LIMIT:
        raise ValueError(f"too many free nodes for an exact comparison: {len(regular)}")

    mpa, timeline = run_general_mpa(graph, zeros, rule)
    e_dev = []
    e_rank = []
    est_argmax = []
    for t in range(1, timeline.rounds + 1):
        row = timeline.at(t)
        e_dev.append(mean_deviation_error(exact.hic, row, regular))
        e_rank.append(mean_rank_error(exact.hic, row, regular))
        est_argmax.append(argmax_smallest_id({i: float(row[i]) for i in regular}))

    degree_err = mean_rank_error(exact.hic, degree_centrality(graph), regular)
    eigen_err = mean_rank_error(exact.hic, eigenvector_centrality(graph), regular)
    return ErrorReport(
        e_dev=tuple(e_dev),
        e_rank=tuple(e_rank),
        rounds=timeline.rounds,
        stopping_reason=mpa.stopping_reason,
        exact_argmax=exact.argmax_node,
        estimated_argmax=tuple(est_argmax),
        degree_rank_error=degree_err,
        eigen_rank_error=eigen_err,
        regular=regular,
    )
