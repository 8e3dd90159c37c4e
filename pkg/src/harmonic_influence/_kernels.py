"""Per-round update kernels for the iterative message passing.

The round update is the hot loop of the package: on a graph with m edges it
touches all 2m directed messages once per round, and convergence can take
thousands of rounds.  Two interchangeable implementations are provided:

* a numba ``@njit`` version, used by default when numba is importable;
* a pure-numpy version built on ``bincount`` aggregation.

Set ``HIC_PURE_NUMPY=1`` in the environment to force the numpy path.  Both
paths evaluate the same formula; ``benchmarks/bench_mpa.py`` compares them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import WeightedGraph


def pure_numpy_requested() -> bool:
    return os.environ.get("HIC_PURE_NUMPY", "").strip().lower() in {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class EdgeIndex:
    """Directed-edge arrays for one (graph, zero_set) pair.

    Directed edges are sorted by (src, dst); ``rev[e]`` is the index of the
    opposite direction of edge ``e``.
    """

    node_count: int
    src: np.ndarray
    dst: np.ndarray
    rev: np.ndarray
    cond: np.ndarray
    res: np.ndarray
    stub_src: np.ndarray
    stub_node: np.ndarray

    @property
    def directed_count(self) -> int:
        return self.src.shape[0]


def build_edge_index(graph: WeightedGraph, zero_set: Iterable[int]) -> EdgeIndex:
    zeros = {int(i) for i in zero_set}
    for i in zeros:
        graph._check_node(i)
    pairs: list[tuple[int, int, float]] = []
    for u, v, c in graph.edge_list():
        pairs.append((u, v, c))
        pairs.append((v, u, c))
    pairs.sort()
    m = len(pairs)
    src = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=m)
    dst = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=m)
    cond = np.fromiter((p[2] for p in pairs), dtype=np.float64, count=m)
    position = {(p[0], p[1]): e for e, p in enumerate(pairs)}
    rev = np.fromiter((position[(p[1], p[0])] for p in pairs), dtype=np.int64, count=m)
    stub_node = np.zeros(graph.node_count, dtype=np.bool_)
    for i in zeros:
        stub_node[i] = True
    return EdgeIndex(
        node_count=graph.node_count,
        src=src,
        dst=dst,
        rev=rev,
        cond=cond,
        res=1.0 / cond,
        stub_src=stub_node[src],
        stub_node=stub_node,
    )


def initial_messages(index: EdgeIndex) -> tuple[np.ndarray, np.ndarray]:
    """Unit messages from free senders, zero messages from anchored ones."""
    w = np.where(index.stub_src, 0.0, 1.0)
    return w, w.copy()


def mpa_round_numpy(index: EdgeIndex, w: np.ndarray, h: np.ndarray):
    wh = w * h
    s_wh = np.bincount(index.dst, weights=wh, minlength=index.node_count)
    s_u = np.bincount(index.dst, weights=(1.0 - w) * index.cond,
                      minlength=index.node_count)
    # Exclusive sums by subtracting the reverse edge's contribution; clamp
    # at zero so cancellation noise cannot push w above 1.
    h_new = np.maximum(s_wh[index.src] - wh[index.rev], 0.0) + 1.0
    inner = np.maximum(s_u[index.src] - (1.0 - w[index.rev]) * index.cond, 0.0)
    w_new = 1.0 / (1.0 + index.res * inner)
    w_new[index.stub_src] = 0.0
    h_new[index.stub_src] = 0.0
    return w_new, h_new


def estimates_numpy(index: EdgeIndex, w: np.ndarray, h: np.ndarray) -> np.ndarray:
    est = np.bincount(index.dst, weights=w * h, minlength=index.node_count) + 1.0
    est[index.stub_node] = np.nan
    return est


try:
    if pure_numpy_requested():
        raise ImportError("pure-numpy path requested via HIC_PURE_NUMPY")
    from numba import njit

    @njit(cache=True)
    def _round_jit(src, dst, rev, cond, res, stub_src, w, h, n):
        m = w.shape[0]
        s_wh = np.zeros(n)
        s_u = np.zeros(n)
        for e in range(m):
            s_wh[dst[e]] += w[e] * h[e]
            s_u[dst[e]] += (1.0 - w[e]) * cond[e]
        w_new = np.empty(m)
        h_new = np.empty(m)
        for e in range(m):
            if stub_src[e]:
                w_new[e] = 0.0
                h_new[e] = 0.0
            else:
                i = src[e]
                r = rev[e]
                hh = s_wh[i] - w[r] * h[r]
                if hh < 0.0:
                    hh = 0.0
                h_new[e] = hh + 1.0
                inner = s_u[i] - (1.0 - w[r]) * cond[r]
                if inner < 0.0:
                    inner = 0.0
                w_new[e] = 1.0 / (1.0 + res[e] * inner)
        return w_new, h_new

    @njit(cache=True)
    def _estimates_jit(dst, stub_node, w, h, n):
        est = np.full(n, np.nan)
        acc = np.zeros(n)
        for e in range(w.shape[0]):
            acc[dst[e]] += w[e] * h[e]
        for i in range(n):
            if not stub_node[i]:
                est[i] = acc[i] + 1.0
        return est

    def mpa_round_numba(index: EdgeIndex, w: np.ndarray, h: np.ndarray):
        return _round_jit(index.src, index.dst, index.rev, index.cond,
                          index.res, index.stub_src, w, h, index.node_count)

    def estimates_numba(index: EdgeIndex, w: np.ndarray, h: np.ndarray) -> np.ndarray:
        return _estimates_jit(index.dst, index.stub_node, w, h, index.node_count)

    HAVE_NUMBA = True
except ImportError:
    mpa_round_numba = None
    estimates_numba = None
    HAVE_NUMBA = False

if HAVE_NUMBA:
    BACKEND = "numba"
    mpa_round = mpa_round_numba
    estimates = estimates_numba
else:
    BACKEND = "numpy"
    mpa_round = mpa_round_numpy
    estimates = estimates_numpy
