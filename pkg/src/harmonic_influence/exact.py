"""Ground-truth solvers for anchored opinion dynamics.

Opinions of free nodes relax to the conductance-weighted average of their
neighbors while anchored nodes never move.  The fixed point is the harmonic
extension of the anchor values, computed here by a direct dense solve (or,
past a size limit, by iterating the dynamics themselves).  The influence
value of a node is the sum of the voltages it induces when held at one
against the zero-anchored set; every message-passing result in this package
is tested against these routines.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DimensionMismatchError,
    DisconnectedGraphError,
    EmptyStubbornSetError,
    NoConvergenceError,
    SingularSystemError,
)
from .graph import StubbornConfig, WeightedGraph, is_connected

# Direct dense solve up to this many free nodes; beyond it fall back to
# iterating the dynamics, which needs no extra memory.
DENSE_NODE_LIMIT = 2000

# Max infinity-norm residual accepted from a solve.
RESIDUAL_TOL = 1e-10

_ITER_CAP = 10_000_000


class StoppingReason(enum.Enum):
    EXACT = "exact"
    CONVERGED = "converged"
    MAX_ITERS = "max-iters"


@dataclass(frozen=True)
class StochasticSystem:
    """Row-stochastic weight table derived from conductances.

    Free rows hold ``C_ij / sum_k C_ik``; anchored rows are identically
    zero (anchored nodes never update).
    """

    Q: np.ndarray
    regular: tuple[int, ...]
    stubborn: tuple[int, ...]

    @property
    def node_count(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True)
class VoltageProfile:
    """Per-node voltages in [0, 1] for a zero set plus one unit anchor."""

    values: np.ndarray
    zero_set: frozenset[int]
    one_node: int


@dataclass(frozen=True)
class HicResult:
    """Per-node influence values plus how they were obtained.

    ``hic`` has no entries for zero-anchored nodes (their influence is
    undefined, not zero).  ``argmax_node`` breaks exact ties toward the
    smallest node id and is ``None`` when no node has a value.
    """

    hic: dict[int, float]
    argmax_node: int | None
    rounds_or_solves: int
    stopping_reason: StoppingReason


def argmax_smallest_id(values: dict[int, float]) -> int | None:
    best: int | None = None
    for node in sorted(values):
        if best is None or values[node] > values[best]:
            best = node
    return best


def build_system(graph: WeightedGraph, stubborn: Iterable[int]) -> StochasticSystem:
    """Normalize conductances into update weights, zeroing anchored rows."""
    stub = sorted({int(i) for i in stubborn})
    for i in stub:
        graph._check_node(i)
    if not stub:
        raise EmptyStubbornSetError("stubborn set must be nonempty")
    if not is_connected(graph):
        raise DisconnectedGraphError("build_system requires a connected graph")

    n = graph.node_count
    C = np.zeros((n, n))
    for u, v, c in graph.edge_list():
        C[u, v] = c
        C[v, u] = c
    Q = np.zeros((n, n))
    stub_set = set(stub)
    for i in range(n):
        if i in stub_set:
            continue
        total = C[i].sum()
        if total > 0.0:
            Q[i] = C[i] / total
    Q.flags.writeable = False
    regular = tuple(i for i in range(n) if i not in stub_set)
    return StochasticSystem(Q=Q, regular=regular, stubborn=tuple(stub))


def dynamics_step(system: StochasticSystem, x: np.ndarray) -> np.ndarray:
    """One synchronous averaging step; anchored entries pass through."""
    x = np.asarray(x, dtype=float)
    if x.shape != (system.node_count,):
        raise DimensionMismatchError(
            f"state has shape {x.shape}, expected ({system.node_count},)"
        )
    out = system.Q @ x
    stub = list(system.stubborn)
    out[stub] = x[stub]
    return out


def harmonic_extension(
    graph: WeightedGraph,
    config: StubbornConfig,
    residual_tol: float = RESIDUAL_TOL,
) -> VoltageProfile:
    """Voltages with ``zero_set`` grounded and ``one_node`` held at 1.

    Free-node values solve the averaging fixed point; the returned profile
    has infinity-norm residual at most ``residual_tol``.
    """
    if config.one_node is None:
        raise ValueError("harmonic_extension needs a unit-anchored node")
    config.check_against(graph)
    if not config.zero_set:
        raise EmptyStubbornSetError("zero_set must be nonempty")
    if not is_connected(graph):
        raise DisconnectedGraphError("harmonic_extension requires a connected graph")

    ell = config.one_node
    zeros = set(config.zero_set)
    n = graph.node_count
    free = [i for i in range(n) if i not in zeros and i != ell]

    values = np.zeros(n)
    values[ell] = 1.0
    if free:
        system = build_system(graph, stubborn=zeros | {ell})
        Q_ff = system.Q[np.ix_(free, free)]
        b = system.Q[free, ell]
        x = _solve_fixed_point(Q_ff, b, residual_tol)
        if x.min() < -1e-9 or x.max() > 1.0 + 1e-9:
            raise SingularSystemError("solution escaped [0, 1]; input weights are broken")
        values[free] = np.clip(x, 0.0, 1.0)
    values.flags.writeable = False
    return VoltageProfile(values=values, zero_set=frozenset(zeros), one_node=ell)


def _solve_fixed_point(Q_ff: np.ndarray, b: np.ndarray, residual_tol: float) -> np.ndarray:
    """Solve ``(I - Q_ff) x = b`` with residual below ``residual_tol``."""
    k = Q_ff.shape[0]
    if k <= DENSE_NODE_LIMIT:
        A = np.eye(k) - Q_ff
        try:
            x = np.linalg.solve(A, b)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(str(exc)) from exc
        residual = np.abs(A @ x - b).max() if k else 0.0
        if residual > residual_tol:
            raise SingularSystemError(f"solve residual {residual:.3e} above tolerance")
        return x
    # Large system: iterate the dynamics. The step size equals the residual
    # of the current iterate, so the stop test is the residual test.
    x = b.copy()
    for _ in range(_ITER_CAP):
        x_next = Q_ff @ x + b
        if np.abs(x_next - x).max() <= residual_tol:
            return x_next
        x = x_next
    raise NoConvergenceError("fixed-point iteration hit its cap")


def voltage_rescale(profile: VoltageProfile, w0: float, w1: float) -> np.ndarray:
    """Affine map of a unit profile onto anchors ``w0`` (zero set) and ``w1``."""
    return w0 + (w1 - w0) * profile.values


def hic_exact(
    graph: WeightedGraph,
    zero_set: Iterable[int],
    ell: int,
    residual_tol: float = RESIDUAL_TOL,
) -> float:
    """Influence of ``ell``: the sum of all voltages it induces.

    Includes ``ell``'s own unit contribution; zero-anchored nodes
    contribute 0.
    """
    profile = harmonic_extension(
        graph,
        StubbornConfig(zero_set=frozenset(int(i) for i in zero_set), one_node=int(ell)),
        residual_tol=residual_tol,
    )
    return float(profile.values.sum())


def hic_all_exact(graph: WeightedGraph, zero_set: Iterable[int]) -> HicResult:
    """Influence of every free node, from one factorization.

    Inverting the grounded conductance Laplacian gives, column by column,
    the voltage profile of each candidate anchor up to scale: with
    ``G = L_ff^-1`` the profile of anchor ``l`` is ``G[:, l] / G[l, l]``,
    so its influence is the column sum over ``G[l, l]``.  Matches a
    per-node :func:`hic_exact` loop to solver accuracy.
    """
    zeros = {int(i) for i in zero_set}
    for i in zeros:
        graph._check_node(i)
    if not zeros:
        raise EmptyStubbornSetError("zero_set must be nonempty")
    if not is_connected(graph):
        raise DisconnectedGraphError("hic_all_exact requires a connected graph")

    free = [i for i in graph.nodes() if i not in zeros]
    if not free:
        return HicResult(hic={}, argmax_node=None, rounds_or_solves=0,
                         stopping_reason=StoppingReason.EXACT)

    n = graph.node_count
    L = np.zeros((n, n))
    for u, v, c in graph.edge_list():
        L[u, v] -= c
        L[v, u] -= c
        L[u, u] += c
        L[v, v] += c
    L_ff = L[np.ix_(free, free)]
    try:
        G = np.linalg.inv(L_ff)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - valid input never lands here
        raise SingularSystemError(str(exc)) from exc

    totals = G.sum(axis=0) / np.diag(G)
    hic = {node: float(totals[pos]) for pos, node in enumerate(free)}
    return HicResult(
        hic=hic,
        argmax_node=argmax_smallest_id(hic),
        rounds_or_solves=1,
        stopping_reason=StoppingReason.EXACT,
    )
