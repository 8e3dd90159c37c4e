"""Iterative message passing on arbitrary connected graphs.

The tree recursion is run synchronously on every directed edge at every
round, starting from unit messages on free senders.  Round ``t`` estimates
are assembled from the messages available after ``t`` exchanges, so round 1
is the purely local (degree-based) estimate.  On a tree the estimates reach
the exact values within ``diameter`` rounds; with cycles the algorithm
effectively evaluates each node on its non-backtracking unrolling of the
graph (built explicitly here as a diagnostic), converging in practice but
without an exactness guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np

from . import _kernels
from ._kernels import EdgeIndex, build_edge_index, initial_messages
from .errors import DisconnectedGraphError, EmptyStubbornSetError
from .exact import HicResult, StoppingReason, argmax_smallest_id
from .graph import WeightedGraph, is_connected
from .tree_mpa import node_value, run_message_sweep

DEFAULT_TOL = 1e-5
DEFAULT_MAX_ITERS = 10_000


@dataclass(frozen=True)
class StoppingRule:
    """Stop when the mean absolute estimate change drops below ``tol``,
    or after ``max_iters`` rounds."""

    tol: float = DEFAULT_TOL
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")


@dataclass
class IterativeState:
    """Round counter, per-directed-edge messages, and per-node estimates.

    ``estimates`` is NaN on zero-anchored nodes: their influence is
    reported as absent, never as zero.
    """

    t: int
    w: np.ndarray
    h: np.ndarray
    estimates: np.ndarray
    index: EdgeIndex = field(repr=False)

    def message(self, src: int, dst: int) -> tuple[float, float]:
        mask = (self.index.src == src) & (self.index.dst == dst)
        (e,) = np.nonzero(mask)[0]
        return float(self.w[e]), float(self.h[e])

    def messages(self) -> Iterator[tuple[int, int, float, float]]:
        for e in range(self.index.directed_count):
            yield (int(self.index.src[e]), int(self.index.dst[e]),
                   float(self.w[e]), float(self.h[e]))


def initial_state(graph: WeightedGraph, zero_set: Iterable[int]) -> IterativeState:
    index = build_edge_index(graph, zero_set)
    w, h = initial_messages(index)
    return IterativeState(
        t=1, w=w, h=h, estimates=_kernels.estimates(index, w, h), index=index
    )


def mpa_step(graph: WeightedGraph, zero_set: Iterable[int],
             state: IterativeState) -> IterativeState:
    """One synchronous round: all messages update from the previous round."""
    index = state.index
    if index.node_count != graph.node_count:
        raise ValueError("state was built for a different graph")
    w, h = _kernels.mpa_round(index, state.w, state.h)
    return IterativeState(
        t=state.t + 1, w=w, h=h, estimates=_kernels.estimates(index, w, h), index=index
    )


@dataclass(frozen=True)
class MpaTimeline:
    """Per-round estimates, rows ``t = 1 .. rounds`` (NaN on anchored nodes)."""

    estimates: np.ndarray
    regular: tuple[int, ...]

    @property
    def rounds(self) -> int:
        return self.estimates.shape[0]

    def at(self, t: int) -> np.ndarray:
        return self.estimates[t - 1]

    def write_csv(self, target: str | IO[str]) -> None:
        lines = ["t,node_id,estimate"]
        for t in range(1, self.rounds + 1):
            row = self.estimates[t - 1]
            for i in self.regular:
                lines.append(f"{t},{i},{row[i]:.12g}")
        text = "\n".join(lines) + "\n"
        if isinstance(target, str):
            with open(target, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            target.write(text)


def run_general_mpa(
    graph: WeightedGraph,
    zero_set: Iterable[int],
    rule: StoppingRule | None = None,
) -> tuple[HicResult, MpaTimeline]:
    """Iterate rounds until the estimates settle or the cap is reached.

    The full per-round estimate history is returned for error metrics; the
    stopping reason records whether the tolerance or the cap ended the run.
    """
    rule = rule or StoppingRule()
    zeros = {int(i) for i in zero_set}
    if not zeros:
        raise EmptyStubbornSetError("zero_set must be nonempty")
    if not is_connected(graph):
        raise DisconnectedGraphError("run_general_mpa requires a connected graph")

    index = build_edge_index(graph, zeros)
    regular = tuple(i for i in graph.nodes() if i not in zeros)
    w, h = initial_messages(index)
    est = _kernels.estimates(index, w, h)
    history = [est]
    t = 1
    reason = StoppingReason.MAX_ITERS
    if not regular:
        reason = StoppingReason.CONVERGED
    else:
        reg = np.fromiter(regular, dtype=np.int64)
        while t < rule.max_iters:
            w, h = _kernels.mpa_round(index, w, h)
            new_est = _kernels.estimates(index, w, h)
            t += 1
            history.append(new_est)
            delta = float(np.abs(new_est[reg] - est[reg]).mean())
            est = new_est
            if delta < rule.tol:
                reason = StoppingReason.CONVERGED
                break

    final = history[-1]
    hic = {i: float(final[i]) for i in regular}
    result = HicResult(
        hic=hic,
        argmax_node=argmax_smallest_id(hic),
        rounds_or_solves=t,
        stopping_reason=reason,
    )
    return result, MpaTimeline(estimates=np.vstack(history), regular=regular)


@dataclass(frozen=True)
class ComputationTree:
    """Depth-limited non-backtracking unrolling of a graph from a root.

    Node 0 is the root; ``original[i]`` is the graph node a tree node
    copies, ``level[i]`` its distance from the root.  Conductances are
    copied from the originating edges.  Messages reaching the root after
    ``t`` rounds of the iterative algorithm come exactly from the walks of
    length ``t``, so the unrolling at depth ``t`` reproduces the round-``t``
    estimate of the root.
    """

    graph: WeightedGraph
    original: tuple[int, ...]
    level: tuple[int, ...]
    depth: int

    @property
    def root(self) -> int:
        return 0

    def anchored_copies(self, zero_set: Iterable[int]) -> frozenset[int]:
        zeros = {int(i) for i in zero_set}
        return frozenset(i for i, orig in enumerate(self.original) if orig in zeros)


def build_computation_tree(graph: WeightedGraph, root: int, depth: int) -> ComputationTree:
    """Unroll all walks from ``root`` that never immediately backtrack."""
    graph._check_node(root)
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    original = [root]
    level = [0]
    edges: list[tuple[int, int, float]] = []
    # frontier entries: (tree node id, graph node, graph node it came from)
    frontier: list[tuple[int, int, int | None]] = [(0, root, None)]
    for _ in range(depth):
        next_frontier: list[tuple[int, int, int | None]] = []
        for node_id, at, came_from in frontier:
            for nbr in graph.neighbors(at):
                if nbr == came_from:
                    continue
                child = len(original)
                original.append(nbr)
                level.append(level[node_id] + 1)
                edges.append((node_id, child, graph.conductance(at, nbr)))
                next_frontier.append((child, nbr, at))
        frontier = next_frontier
    return ComputationTree(
        graph=WeightedGraph(len(original), edges),
        original=tuple(original),
        level=tuple(level),
        depth=depth,
    )


def hic_on_computation_tree(
    graph: WeightedGraph, zero_set: Iterable[int], root: int, depth: int
) -> float:
    """Exact influence of the root inside its depth-limited unrolling.

    Frontier leaves inject the unit initial message, so this equals the
    round-``depth`` estimate of the iterative algorithm at ``root``.
    """
    zeros = {int(i) for i in zero_set}
    if root in zeros:
        raise ValueError(f"root {root} is zero-anchored; its influence is undefined")
    ct = build_computation_tree(graph, root, depth)
    state, _ = run_message_sweep(ct.graph, ct.anchored_copies(zeros))
    return float(node_value(ct.graph, state, ct.root))
