"""Exact two-phase message passing on trees.

Each directed edge ``i -> j`` carries a pair ``(w, h)``.  The ``w`` entry is
the voltage node ``i`` takes when ``j`` is held at 1 and the zero-anchored
nodes on ``i``'s side of the edge are grounded; ``h`` is the influence value
of ``i`` computed inside that side alone.  A node may send to ``j`` once it
has heard from all of its other neighbors, so messages sweep from the
leaves inward and back out; every directed edge fires exactly once.  With
anchored senders emitting ``(0, 0)`` the recursion needs no explicit
effective resistances and the "no anchor on this side" case appears simply
as ``w = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    EmptyStubbornSetError,
    MissingInboundError,
    NotATreeError,
    TooFewStubbornError,
)
from .exact import HicResult, StoppingReason, argmax_smallest_id
from .graph import (
    SubtreePartition,
    WeightedGraph,
    induced_subgraph,
    is_tree,
    tree_partition,
)


@dataclass(frozen=True)
class DirectedMessage:
    src: int
    dst: int
    w: float
    h: float


@dataclass
class MessageState:
    """Message table with one slot per directed edge (None until sent)."""

    messages: dict[tuple[int, int], DirectedMessage | None]

    @classmethod
    def empty(cls, graph: WeightedGraph) -> "MessageState":
        slots: dict[tuple[int, int], DirectedMessage | None] = {}
        for u, v, _ in graph.edge_list():
            slots[(u, v)] = None
            slots[(v, u)] = None
        return cls(messages=slots)

    def sent(self, src: int, dst: int) -> bool:
        return self.messages.get((src, dst)) is not None

    def get(self, src: int, dst: int) -> DirectedMessage:
        msg = self.messages.get((src, dst))
        if msg is None:
            raise MissingInboundError(f"message {src}->{dst} has not been sent")
        return msg

    def put(self, msg: DirectedMessage) -> None:
        self.messages[(msg.src, msg.dst)] = msg

    @property
    def sent_count(self) -> int:
        return sum(1 for m in self.messages.values() if m is not None)


@dataclass(frozen=True)
class MpaStats:
    """Round, message and per-node operation counts of one sweep.

    ``per_node_ops`` counts the inbound-message reads a node performs,
    which is at most ``degree**2`` per node.
    """

    rounds: int
    messages_sent: int
    per_node_ops: tuple[int, ...]


def init_leaf_messages(tree: WeightedGraph, zero_set: Iterable[int]) -> MessageState:
    """Seed the sweep: every leaf's single outbound message.

    A free leaf sends ``(1, 1)`` (its side holds no anchor and only
    itself); an anchored leaf sends ``(0, 0)``.
    """
    if not is_tree(tree):
        raise NotATreeError("init_leaf_messages requires a tree")
    zeros = {int(i) for i in zero_set}
    state = MessageState.empty(tree)
    for i in tree.nodes():
        if tree.degree(i) == 1:
            (j,) = tree.neighbors(i)
            value = 0.0 if i in zeros else 1.0
            state.put(DirectedMessage(src=i, dst=j, w=value, h=value))
    return state


def message_update(
    tree: WeightedGraph,
    zero_set: Iterable[int],
    i: int,
    j: int,
    inbound: Mapping[int, DirectedMessage],
) -> DirectedMessage:
    """Combine the messages into ``i`` (except from ``j``) into ``i -> j``."""
    zeros = {int(s) for s in zero_set}
    if not tree.has_edge(i, j):
        raise MissingInboundError(f"({i}, {j}) is not an edge")
    if i in zeros:
        return DirectedMessage(src=i, dst=j, w=0.0, h=0.0)
    h = 1.0
    inner = 0.0
    for k in tree.neighbors(i):
        if k == j:
            continue
        if k not in inbound:
            raise MissingInboundError(f"message {k}->{i} missing for update of {i}->{j}")
        msg = inbound[k]
        h += msg.w * msg.h
        inner += (1.0 - msg.w) * tree.conductance(i, k)
    w = 1.0 / (1.0 + tree.resistance(i, j) * inner)
    return DirectedMessage(src=i, dst=j, w=w, h=h)


def run_message_sweep(
    tree: WeightedGraph, zero_set: Iterable[int]
) -> tuple[MessageState, MpaStats]:
    """Fire every directed message in the first round its inputs exist.

    Runs synchronized rounds: within a round all fireable messages fire at
    once.  Completes in at most ``diameter`` rounds with exactly ``2n - 2``
    messages on an n-node tree.
    """
    if not is_tree(tree):
        raise NotATreeError("run_message_sweep requires a tree")
    zeros = {int(i) for i in zero_set}
    for i in zeros:
        tree._check_node(i)

    state = MessageState.empty(tree)
    pending: dict[tuple[int, int], int] = {}
    frontier: list[tuple[int, int]] = []
    for (i, j) in state.messages:
        need = tree.degree(i) - 1
        pending[(i, j)] = need
        if need == 0:
            frontier.append((i, j))

    ops = [0] * tree.node_count
    rounds = 0
    sent = 0
    while frontier:
        rounds += 1
        fired: list[DirectedMessage] = []
        for (i, j) in frontier:
            if i in zeros:
                msg = DirectedMessage(src=i, dst=j, w=0.0, h=0.0)
            else:
                inbound = {k: state.get(k, i) for k in tree.neighbors(i) if k != j}
                ops[i] += len(inbound)
                msg = message_update(tree, zeros, i, j, inbound)
            fired.append(msg)
        next_frontier: list[tuple[int, int]] = []
        for msg in fired:
            state.put(msg)
            sent += 1
            for j2 in tree.neighbors(msg.dst):
                if j2 == msg.src:
                    continue
                key = (msg.dst, j2)
                pending[key] -= 1
                if pending[key] == 0:
                    next_frontier.append(key)
        frontier = next_frontier

    return state, MpaStats(rounds=rounds, messages_sent=sent, per_node_ops=tuple(ops))


def node_value(tree: WeightedGraph, state: MessageState, i: int) -> float:
    """Influence of a free node from its full inbound message set."""
    total = 1.0
    for k in tree.neighbors(i):
        msg = state.get(k, i)
        total += msg.w * msg.h
    return total


def run_tree_mpa(
    tree: WeightedGraph, zero_set: Iterable[int]
) -> tuple[HicResult, MpaStats]:
    """Influence of every free node of a tree by message passing alone."""
    zeros = {int(i) for i in zero_set}
    if not zeros:
        raise EmptyStubbornSetError("zero_set must be nonempty")
    state, stats = run_message_sweep(tree, zeros)

    hic: dict[int, float] = {}
    ops = list(stats.per_node_ops)
    for i in tree.nodes():
        if i in zeros:
            continue
        hic[i] = node_value(tree, state, i)
        ops[i] += tree.degree(i)

    result = HicResult(
        hic=hic,
        argmax_node=argmax_smallest_id(hic),
        rounds_or_solves=stats.rounds,
        stopping_reason=StoppingReason.EXACT,
    )
    return result, MpaStats(
        rounds=stats.rounds,
        messages_sent=stats.messages_sent,
        per_node_ops=tuple(ops),
    )


def candidate_set(
    tree: WeightedGraph, zero_set: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]]:
    """Placement candidates on a tree whose anchors are all leaves.

    ``K`` is the set of free nodes lying on some anchor-to-anchor path
    (the minimal subtree spanning the anchors, minus the anchors
    themselves); ``K'`` keeps only its members of degree at least three.
    The best placement always lies in ``K``, and in ``K'`` when that set
    is nonempty, provided all resistances are unitary.
    """
    if not is_tree(tree):
        raise NotATreeError("candidate_set requires a tree")
    zeros = {int(i) for i in zero_set}
    for i in zeros:
        tree._check_node(i)
    if len(zeros) < 2:
        raise TooFewStubbornError(
            "candidate pruning needs two anchors; with one, the best "
            "placement is simply its neighbor"
        )
    for s in zeros:
        if tree.degree(s) != 1:
            raise ValueError(f"anchored node {s} is not a leaf; split it first")

    # Peel non-anchored leaves until only the spanning subtree remains.
    degree = {i: tree.degree(i) for i in tree.nodes()}
    alive = set(tree.nodes())
    peel = [i for i in alive if degree[i] == 1 and i not in zeros]
    while peel:
        v = peel.pop()
        alive.discard(v)
        for u in tree.neighbors(v):
            if u in alive:
                degree[u] -= 1
                if degree[u] == 1 and u not in zeros:
                    peel.append(u)
    K = frozenset(alive - zeros)
    K_prime = frozenset(i for i in K if tree.degree(i) >= 3)
    return K, K_prime


def split_stubborn(
    tree: WeightedGraph, zero_set: Iterable[int]
) -> tuple[WeightedGraph, frozenset[int], tuple[int, ...]]:
    """Split every interior anchored node into one leaf copy per edge.

    Grounded nodes all share a voltage, so splitting one into independent
    leaves (the reverse of gluing) changes no free-node voltage.  The
    result is generally a forest: one component per free component of the
    input.  Returns the new graph, the new anchor set, and a map from new
    node id back to the original id.
    """
    zeros = {int(i) for i in zero_set}
    for i in zeros:
        tree._check_node(i)
    original = list(range(tree.node_count))
    edges: list[tuple[int, int, float]] = []
    new_zeros = set(zeros)
    next_id = tree.node_count
    kept: set[int] = set()

    def place(x: int) -> int:
        nonlocal next_id
        if x not in zeros or tree.degree(x) <= 1:
            return x
        if x not in kept:
            kept.add(x)  # the original id serves as the first leaf copy
            return x
        copy = next_id
        next_id += 1
        original.append(x)
        new_zeros.add(copy)
        return copy

    for u, v, c in tree.edge_list():
        edges.append((place(u), place(v), c))
    graph = WeightedGraph(next_id, edges)
    return graph, frozenset(new_zeros), tuple(original)


def osap_tree(tree: WeightedGraph, zero_set: Iterable[int]) -> HicResult:
    """Best unit-anchor placement on a tree, with candidate pruning.

    Splits the tree at its anchors, runs the message sweep per augmented
    component, and evaluates only the pruned candidate set: the single
    anchor's neighbor when a component touches one anchor, the
    degree-three-or-more path nodes (falling back to all path nodes) when
    resistances are unitary, and every free node otherwise.  The returned
    values cover exactly the candidates considered.
    """
    if not is_tree(tree):
        raise NotATreeError("osap_tree requires a tree")
    zeros = {int(i) for i in zero_set}
    if not zeros:
        raise EmptyStubbornSetError("zero_set must be nonempty")

    partition: SubtreePartition = tree_partition(tree, zeros)
    values: dict[int, float] = {}
    total_rounds = 0
    for comp in partition.components:
        sub, remap = induced_subgraph(tree, comp.augmented)
        back = {new: old for old, new in remap.items()}
        sub_zeros = frozenset(remap[s] for s in comp.augmented - comp.regular)
        result, stats = run_tree_mpa(sub, sub_zeros)
        total_rounds += stats.rounds

        if len(sub_zeros) == 1:
            (s,) = sub_zeros
            (neighbor,) = sub.neighbors(s)
            candidates: frozenset[int] = frozenset({neighbor})
        elif all(c == 1.0 for _, _, c in sub.edge_list()):
            K, K_prime = candidate_set(sub, sub_zeros)
            candidates = K_prime if K_prime else K
        else:
            candidates = frozenset(remap[i] for i in comp.regular)

        for c in candidates:
            values[back[c]] = result.hic[c]

    hic = {i: values[i] for i in sorted(values)}
    return HicResult(
        hic=hic,
        argmax_node=argmax_smallest_id(hic),
        rounds_or_solves=total_rounds,
        stopping_reason=StoppingReason.EXACT,
    )
