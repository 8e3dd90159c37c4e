"""Undirected conductance-weighted graphs and structural queries.

A :class:`WeightedGraph` is immutable after construction: node ids are dense
integers in ``[0, n)`` and every edge carries a positive conductance (the
reciprocal of its resistance).  The module also provides the solver-facing
structural operations: connectivity/tree tests, hop diameter, induced
subgraphs, effective resistance between a grounded node set and a target,
and the partition of a tree into the components left after removing its
zero-anchored nodes.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .errors import (
    DisconnectedGraphError,
    EmptySourceSetError,
    GraphFormatError,
    NotATreeError,
    UnknownNodeError,
)


class _InfiniteResistance(enum.Enum):
    """Distinguished 'no path' outcome of :func:`effective_resistance`.

    Kept out of float arithmetic on purpose: downstream formulas use the
    limit form (a unit voltage message) instead of computing with infinity.
    """

    INFINITE = "infinite"

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "INFINITE_RESISTANCE"


INFINITE_RESISTANCE = _InfiniteResistance.INFINITE


class WeightedGraph:
    """Undirected graph with per-edge positive conductances.

    Edges may be given as ``(u, v)`` pairs (conductance defaults to 1.0,
    the equal-strength special case) or ``(u, v, conductance)`` triples.
    Construction rejects self-loops, duplicate edges, ids outside
    ``[0, node_count)`` and nonpositive conductances.
    """

    __slots__ = ("_n", "_adj", "_edges")

    def __init__(self, node_count: int, edges: Iterable[Sequence]) -> None:
        if node_count < 0:
            raise GraphFormatError(f"negative node count {node_count}")
        self._n = int(node_count)
        adj: list[dict[int, float]] = [dict() for _ in range(self._n)]
        for item in edges:
            if len(item) == 2:
                u, v = item
                c = 1.0
            elif len(item) == 3:
                u, v, c = item
            else:
                raise GraphFormatError(f"edge {item!r} is not (u, v) or (u, v, c)")
            u, v, c = int(u), int(v), float(c)
            if not (0 <= u < self._n and 0 <= v < self._n):
                raise GraphFormatError(f"edge ({u}, {v}) has a node outside [0, {self._n})")
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if v in adj[u]:
                raise GraphFormatError(f"duplicate edge ({u}, {v})")
            if not c > 0.0:
                raise GraphFormatError(f"edge ({u}, {v}) has nonpositive conductance {c}")
            adj[u][v] = c
            adj[v][u] = c
        self._adj = adj
        self._edges: tuple[tuple[int, int, float], ...] = tuple(
            (u, v, adj[u][v]) for u in range(self._n) for v in sorted(adj[u]) if u < v
        )

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def nodes(self) -> range:
        return range(self._n)

    def edge_list(self) -> tuple[tuple[int, int, float], ...]:
        """Edges as ``(u, v, conductance)`` with ``u < v``, sorted."""
        return self._edges

    def neighbors(self, i: int) -> tuple[int, ...]:
        self._check_node(i)
        return tuple(sorted(self._adj[i]))

    def degree(self, i: int) -> int:
        self._check_node(i)
        return len(self._adj[i])

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self._adj[u]

    def conductance(self, u: int, v: int) -> float:
        self._check_node(u)
        self._check_node(v)
        try:
            return self._adj[u][v]
        except KeyError:
            raise UnknownNodeError(f"no edge between {u} and {v}") from None

    def resistance(self, u: int, v: int) -> float:
        return 1.0 / self.conductance(u, v)

    def _check_node(self, i: int) -> None:
        if not (0 <= i < self._n):
            raise UnknownNodeError(f"node {i} outside [0, {self._n})")

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"WeightedGraph(n={self._n}, m={self.edge_count})"


@dataclass(frozen=True)
class StubbornConfig:
    """Anchoring of a graph: a zero-anchored node set plus an optional
    unit-anchored node."""

    zero_set: frozenset[int]
    one_node: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "zero_set", frozenset(int(i) for i in self.zero_set))
        if any(i < 0 for i in self.zero_set):
            raise UnknownNodeError("zero_set contains a negative node id")
        if self.one_node is not None and self.one_node in self.zero_set:
            raise ValueError(f"unit-anchored node {self.one_node} is also in the zero set")

    def check_against(self, graph: WeightedGraph) -> None:
        for i in self.zero_set:
            graph._check_node(i)
        if self.one_node is not None:
            graph._check_node(self.one_node)


@dataclass(frozen=True)
class ValidationReport:
    """Report-style outcome of :func:`validate`; never raises."""

    node_count: int
    connected: bool
    self_loops: tuple[tuple[int, int], ...] = ()
    duplicate_edges: tuple[tuple[int, int], ...] = ()
    out_of_range: tuple[tuple[int, int], ...] = ()
    nonpositive_conductances: tuple[tuple[int, int, float], ...] = ()

    @property
    def well_formed(self) -> bool:
        return not (
            self.self_loops
            or self.duplicate_edges
            or self.out_of_range
            or self.nonpositive_conductances
        )


@dataclass(frozen=True)
class SubtreeComponent:
    """One component of a tree after removing the zero-anchored nodes.

    ``regular`` holds the component's free nodes; ``augmented`` adds the
    zero-anchored nodes adjacent to them, so that the induced subgraph of
    ``augmented`` is again a tree with those anchors as leaves.
    """

    regular: frozenset[int]
    augmented: frozenset[int]


@dataclass(frozen=True)
class SubtreePartition:
    components: tuple[SubtreeComponent, ...] = field(default=())


def validate(node_count: int, edges: Iterable[Sequence]) -> ValidationReport:
    """Check raw edge data for structural violations, report style.

    Constructed :class:`WeightedGraph` instances already enforce the
    structural invariants, so this takes the raw description; pass
    ``graph.node_count, graph.edge_list()`` to re-check a built graph
    (only connectivity can then be flagged).
    """
    self_loops: list[tuple[int, int]] = []
    duplicates: list[tuple[int, int]] = []
    out_of_range: list[tuple[int, int]] = []
    nonpositive: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    clean: list[tuple[int, int, float]] = []
    for item in edges:
        if len(item) == 2:
            u, v = item
            c = 1.0
        else:
            u, v, c = item
        u, v, c = int(u), int(v), float(c)
        if not (0 <= u < node_count and 0 <= v < node_count):
            out_of_range.append((u, v))
            continue
        if u == v:
            self_loops.append((u, v))
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            duplicates.append(key)
            continue
        seen.add(key)
        if not c > 0.0:
            nonpositive.append((u, v, c))
            continue
        clean.append((u, v, c))
    graph = WeightedGraph(node_count, clean)
    return ValidationReport(
        node_count=node_count,
        connected=is_connected(graph),
        self_loops=tuple(self_loops),
        duplicate_edges=tuple(duplicates),
        out_of_range=tuple(out_of_range),
        nonpositive_conductances=tuple(nonpositive),
    )


def _component_of(graph: WeightedGraph, start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in graph._adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def connected_components(graph: WeightedGraph) -> list[set[int]]:
    remaining = set(graph.nodes())
    components = []
    while remaining:
        comp = _component_of(graph, min(remaining))
        components.append(comp)
        remaining -= comp
    return components


def is_connected(graph: WeightedGraph) -> bool:
    if graph.node_count == 0:
        return True
    return len(_component_of(graph, 0)) == graph.node_count


def is_tree(graph: WeightedGraph) -> bool:
    """True iff the graph is connected with exactly ``n - 1`` edges."""
    return is_connected(graph) and graph.edge_count == graph.node_count - 1


def _bfs_hops(graph: WeightedGraph, start: int) -> list[int]:
    dist = [-1] * graph.node_count
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in graph._adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def diameter(graph: WeightedGraph) -> int:
    """Largest hop distance between any two nodes (conductances ignored)."""
    if not is_connected(graph):
        raise DisconnectedGraphError("diameter is undefined on a disconnected graph")
    if graph.node_count == 0:
        return 0
    return max(max(_bfs_hops(graph, s)) for s in graph.nodes())


def eccentricity(graph: WeightedGraph, node: int) -> int:
    dist = _bfs_hops(graph, node)
    if min(dist) < 0:
        raise DisconnectedGraphError("eccentricity is undefined on a disconnected graph")
    return max(dist)


def induced_subgraph(
    graph: WeightedGraph, nodes: Iterable[int]
) -> tuple[WeightedGraph, dict[int, int]]:
    """Subgraph on ``nodes`` with ids remapped densely; returns old->new map.

    Keeps exactly the edges with both endpoints in the set, conductances
    preserved.  The remap assigns new ids in ascending old-id order.
    """
    node_set = sorted({int(i) for i in nodes})
    for i in node_set:
        graph._check_node(i)
    remap = {old: new for new, old in enumerate(node_set)}
    edges = [
        (remap[u], remap[v], c)
        for u, v, c in graph.edge_list()
        if u in remap and v in remap
    ]
    return WeightedGraph(len(node_set), edges), remap


def effective_resistance(
    graph: WeightedGraph, source_set: Iterable[int], target: int
):
    """Equivalent resistance between a glued source set and a target node.

    The sources are held at voltage 0 and the target at 1; the return value
    is the reciprocal of the total current entering the network at the
    target.  Returns :data:`INFINITE_RESISTANCE` when no path connects the
    target to any source.
    """
    sources = {int(i) for i in source_set}
    if not sources:
        raise EmptySourceSetError("source_set must be nonempty")
    for i in sources:
        graph._check_node(i)
    graph._check_node(target)
    if target in sources:
        raise ValueError("target must not belong to the source set")

    component = _component_of(graph, target)
    local_sources = sources & component
    if not local_sources:
        return INFINITE_RESISTANCE

    sub, remap = induced_subgraph(graph, component)
    from .exact import harmonic_extension  # local import to avoid a cycle

    profile = harmonic_extension(
        sub,
        StubbornConfig(zero_set=frozenset(remap[s] for s in local_sources),
                       one_node=remap[target]),
    )
    t_new = remap[target]
    current = sum(
        (1.0 - profile.values[k]) * sub.conductance(t_new, k)
        for k in sub.neighbors(t_new)
    )
    return 1.0 / current


def tree_partition(tree: WeightedGraph, zero_set: Iterable[int]) -> SubtreePartition:
    """Split a tree at its zero-anchored nodes.

    The free nodes fall apart into connected components; each component is
    paired with its augmented node set (the component plus the anchored
    nodes adjacent to it).  Inside each augmented set the anchors have
    degree one, which is what makes per-component solving exact.
    """
    if not is_tree(tree):
        raise NotATreeError("tree_partition requires a tree")
    zeros = {int(i) for i in zero_set}
    for i in zeros:
        tree._check_node(i)

    remaining = set(tree.nodes()) - zeros
    components: list[SubtreeComponent] = []
    while remaining:
        start = min(remaining)
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in tree._adj[u]:
                if v in remaining and v not in comp:
                    comp.add(v)
                    queue.append(v)
        remaining -= comp
        boundary = {
            v for u in comp for v in tree._adj[u] if v in zeros
        }
        components.append(
            SubtreeComponent(regular=frozenset(comp), augmented=frozenset(comp | boundary))
        )
    components.sort(key=lambda c: min(c.regular))
    return SubtreePartition(components=tuple(components))


# ---------------------------------------------------------------------------
# Text file format: '#' comments, 'n <count>' header, 'e <u> <v> [conductance]'
# ---------------------------------------------------------------------------

def parse_graph(lines: Iterable[str]) -> WeightedGraph:
    node_count: int | None = None
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "n":
                if node_count is not None:
                    raise GraphFormatError(f"line {lineno}: repeated node-count line")
                if len(parts) != 2:
                    raise GraphFormatError(f"line {lineno}: expected 'n <count>'")
                node_count = int(parts[1])
            elif kind == "e":
                if node_count is None:
                    raise GraphFormatError(f"line {lineno}: edge before node-count line")
                if len(parts) == 3:
                    edges.append((int(parts[1]), int(parts[2]), 1.0))
                elif len(parts) == 4:
                    edges.append((int(parts[1]), int(parts[2]), float(parts[3])))
                else:
                    raise GraphFormatError(f"line {lineno}: expected 'e <u> <v> [c]'")
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {kind!r}")
        except ValueError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from exc
    if node_count is None:
        raise GraphFormatError("missing 'n <count>' line")
    try:
        return WeightedGraph(node_count, edges)
    except GraphFormatError as exc:
        raise GraphFormatError(str(exc)) from exc


def load_graph(path: str) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_graph(handle)


def format_graph(graph: WeightedGraph) -> str:
    """Canonical text form; parsing it back reproduces the graph exactly."""
    out = [f"n {graph.node_count}"]
    for u, v, c in graph.edge_list():
        if c == 1.0:
            out.append(f"e {u} {v}")
        else:
            out.append(f"e {u} {v} {c!r}")
    return "\n".join(out) + "\n"


def dump_graph(graph: WeightedGraph, target: str | IO[str]) -> None:
    text = format_graph(graph)
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        target.write(text)
