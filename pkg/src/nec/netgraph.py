"""Acyclic multicast networks, unit-capacity max-flow and error-pattern rank.

A :class:`Network` is an acyclic directed multigraph with one source and a
set of sinks.  Channels are kept in a canonical order: nodes are sorted
topologically (Kahn, ties broken by node id) and the outgoing channels of
each node follow their declaration order.  Every tie-break in this package
follows that order so results are reproducible.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import (CyclicGraph, DanglingEndpoint, DuplicateChannelId, InsufficientFlow,
                     NetworkError, SinkHasOutputs, SourceHasInputs, UnknownChannel)


@dataclass(frozen=True)
class Channel:
    id: str
    tail: str
    head: str


class MessageChannel(NamedTuple):
    """Imaginary channel ``d'_k`` feeding source symbol ``k`` (1-based) into s."""

    k: int

    def __str__(self):
        return f"d'{self.k}"


class ErrorChannel(NamedTuple):
    """Imaginary channel ``e'`` injecting the error symbol of real channel ``e``."""

    channel: str

    def __str__(self):
        return f"{self.channel}'"


ErrorPattern = tuple  # tuple of channel ids in canonical order


class Network:
    """Validated single-source acyclic network. Treat as immutable."""

    def __init__(self, nodes: Sequence[str], source: str, sinks: Sequence[str],
                 channels: Sequence[Channel]):
        self.declared_nodes = tuple(nodes)
        self.source = source
        self.sinks = tuple(sinks)
        self.declared_channels = tuple(channels)
        self._validate()
        self.nodes = self._topological_nodes()
        out: dict[str, list[Channel]] = {v: [] for v in self.nodes}
        for ch in self.declared_channels:
            out[ch.tail].append(ch)
        self.channels = tuple(ch for v in self.nodes for ch in out[v])
        self.channel_index = {ch.id: i for i, ch in enumerate(self.channels)}
        self._by_id = {ch.id: ch for ch in self.channels}
        self.out_channels = {v: tuple(ch.id for ch in out[v]) for v in self.nodes}
        inc: dict[str, list[str]] = {v: [] for v in self.nodes}
        for ch in self.channels:
            inc[ch.head].append(ch.id)
        self.in_channels = {v: tuple(ids) for v, ids in inc.items()}
        self._connective: dict[str, tuple[str, ...]] = {}
        self._rank_cache: dict[tuple[str, tuple[str, ...]], int] = {}
        self._mincut_cache: dict[tuple[str, str], int] = {}

    # -- construction helpers ------------------------------------------------

    def _validate(self):
        node_set = set(self.declared_nodes)
        if len(node_set) != len(self.declared_nodes):
            raise NetworkError("duplicate node id")
        if self.source not in node_set:
            raise DanglingEndpoint(f"source {self.source!r} is not a declared node")
        if not self.sinks:
            raise NetworkError("at least one sink is required")
        for t in self.sinks:
            if t not in node_set:
                raise DanglingEndpoint(f"sink {t!r} is not a declared node")
            if t == self.source:
                raise NetworkError("the source cannot be a sink")
        if len(set(self.sinks)) != len(self.sinks):
            raise NetworkError("duplicate sink id")
        seen = set()
        sinks = set(self.sinks)
        for ch in self.declared_channels:
            if ch.id in seen:
                raise DuplicateChannelId(f"channel id {ch.id!r} declared twice")
            seen.add(ch.id)
            for end in (ch.tail, ch.head):
                if end not in node_set:
                    raise DanglingEndpoint(f"channel {ch.id!r} references unknown node {end!r}")
            if ch.tail == ch.head:
                raise CyclicGraph(f"channel {ch.id!r} is a self-loop")
            if ch.tail in sinks:
                raise SinkHasOutputs(f"channel {ch.id!r} leaves sink {ch.tail!r}")
            if ch.head == self.source:
                raise SourceHasInputs(f"channel {ch.id!r} enters the source")

    def _topological_nodes(self) -> tuple[str, ...]:
        indeg = {v: 0 for v in self.declared_nodes}
        succ: dict[str, list[str]] = {v: [] for v in self.declared_nodes}
        for ch in self.declared_channels:
            indeg[ch.head] += 1
            succ[ch.tail].append(ch.head)
        heap = [v for v, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for h in succ[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(heap, h)
        if len(order) != len(self.declared_nodes):
            raise CyclicGraph("the network contains a directed cycle")
        return tuple(order)

    # -- accessors -----------------------------------------------------------

    def channel(self, cid: str) -> Channel:
        try:
            return self._by_id[cid]
        except KeyError:
            raise UnknownChannel(cid) from None

    @property
    def channel_ids(self) -> tuple[str, ...]:
        return tuple(ch.id for ch in self.channels)

    @property
    def internal_nodes(self) -> tuple[str, ...]:
        sinks = set(self.sinks)
        return tuple(v for v in self.nodes if v != self.source and v not in sinks)

    def pattern(self, channels: Iterable[str]) -> ErrorPattern:
        """Normalize a collection of channel ids into canonical order."""
        ids = set(channels)
        for cid in ids:
            if cid not in self.channel_index:
                raise UnknownChannel(cid)
        return tuple(sorted(ids, key=self.channel_index.__getitem__))

    def upstream(self, cid: str) -> set[str]:
        """Channels from which a directed path leads into ``cid`` (excluding it)."""
        seen: set[str] = set()
        stack = list(self.in_channels[self.channel(cid).tail])
        while stack:
            d = stack.pop()
            if d in seen:
                continue
            seen.add(d)
            stack.extend(self.in_channels[self._by_id[d].tail])
        return seen

    def to_document(self) -> dict:
        return {
            "nodes": list(self.declared_nodes),
            "source": self.source,
            "sinks": list(self.sinks),
            "channels": [{"id": c.id, "tail": c.tail, "head": c.head}
                         for c in self.declared_channels],
        }

    def __repr__(self):
        return (f"Network(|V|={len(self.nodes)}, |E|={len(self.channels)}, "
                f"sinks={list(self.sinks)})")


def network_from_dict(doc: dict) -> Network:
    try:
        channels = [Channel(str(c["id"]), str(c["tail"]), str(c["head"]))
                    for c in doc["channels"]]
        return Network([str(v) for v in doc["nodes"]], str(doc["source"]),
                       [str(t) for t in doc["sinks"]], channels)
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network document: {exc}") from None


def parse_network(document: str) -> Network:
    """Parse and validate a JSON network document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise NetworkError("network document must be a JSON object")
    return network_from_dict(doc)


def dump_network(net: Network) -> str:
    return json.dumps(net.to_document(), indent=2) + "\n"


# ---------------------------------------------------------------------------
# max-flow

class _FlowGraph:
    """Integral max-flow by shortest augmenting paths (Edmonds-Karp).

    Arcs are explored in insertion order, which callers make canonical.
    """

    def __init__(self):
        self.adj: dict[Hashable, list[int]] = {}
        self.head: list[Hashable] = []
        self.cap: list[int] = []
        self.label: list = []

    def add_arc(self, u, v, cap: int = 1, label=None) -> int:
        idx = len(self.head)
        self.adj.setdefault(u, []).append(idx)
        self.head.append(v)
        self.cap.append(cap)
        self.label.append(label)
        self.adj.setdefault(v, []).append(idx + 1)
        self.head.append(u)
        self.cap.append(0)
        self.label.append(None)
        return idx

    def max_flow(self, s, t, limit: int | None = None) -> int:
        if s == t:
            raise ValueError("source and target coincide")
        flow = 0
        while limit is None or flow < limit:
            parent: dict = {s: None}
            queue = deque([s])
            while queue and t not in parent:
                u = queue.popleft()
                for a in self.adj.get(u, ()):
                    v = self.head[a]
                    if self.cap[a] > 0 and v not in parent:
                        parent[v] = a
                        queue.append(v)
            if t not in parent:
                break
            v = t
            while parent[v] is not None:
                a = parent[v]
                self.cap[a] -= 1
                self.cap[a ^ 1] += 1
                v = self.head[a ^ 1]
            flow += 1
        return flow

    def flow_on(self, arc: int) -> int:
        return self.cap[arc ^ 1]


_AUX = ("aux-source",)


def min_cut_capacity(net: Network, src: str, dst: str) -> int:
    """Minimum cut capacity between two nodes with unit-capacity channels."""
    if src == dst:
        raise ValueError("min_cut_capacity needs two distinct nodes")
    key = (src, dst)
    if key not in net._mincut_cache:
        g = _FlowGraph()
        for ch in net.channels:
            g.add_arc(ch.tail, ch.head)
        net._mincut_cache[key] = g.max_flow(src, dst)
    return net._mincut_cache[key]


def min_cut_channels(net: Network, src: str, dst: str) -> tuple[str, ...]:
    """One minimum cut: channels leaving the residual-reachable side of ``src``."""
    g = _FlowGraph()
    arcs = [g.add_arc(ch.tail, ch.head, 1, ch.id) for ch in net.channels]
    g.max_flow(src, dst)
    reach = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        for a in g.adj.get(u, ()):
            v = g.head[a]
            if g.cap[a] > 0 and v not in reach:
                reach.add(v)
                stack.append(v)
    return tuple(g.label[a] for a in arcs
                 if g.head[a ^ 1] in reach and g.head[a] not in reach)


def connective_set(net: Network, t: str) -> tuple[str, ...]:
    """Channels from which a directed path reaches ``t``, in canonical order."""
    if t not in net._connective:
        found: set[str] = set()
        seen_nodes = {t}
        stack = [t]
        while stack:
            v = stack.pop()
            for d in net.in_channels[v]:
                found.add(d)
                u = net.channel(d).tail
                if u not in seen_nodes:
                    seen_nodes.add(u)
                    stack.append(u)
        net._connective[t] = net.pattern(found)
    return net._connective[t]


def pattern_rank(net: Network, rho: Iterable[str], t: str) -> int:
    """Rank of an error pattern at sink ``t``.

    Each channel of the pattern is rerouted to start at a fresh auxiliary
    source; the rank is the min cut from that source to ``t``.
    """
    rho = net.pattern(rho)
    key = (t, rho)
    cached = net._rank_cache.get(key)
    if cached is not None:
        return cached
    if not rho:
        net._rank_cache[key] = 0
        return 0
    live = set(connective_set(net, t))
    members = set(rho)
    g = _FlowGraph()
    for ch in net.channels:
        if ch.id not in live:
            continue
        if ch.id in members:
            g.add_arc(_AUX, ch.head)
        else:
            g.add_arc(ch.tail, ch.head)
    value = g.max_flow(_AUX, t) if any(c in live for c in rho) else 0
    net._rank_cache[key] = value
    return value


# ---------------------------------------------------------------------------
# path families

@dataclass(frozen=True)
class Path:
    """A path in the extended network: an imaginary start then real channels."""

    start: MessageChannel | ErrorChannel
    channels: tuple[str, ...]

    @property
    def tokens(self) -> tuple:
        return (self.start,) + self.channels

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class PathFamily:
    sink: str
    pattern: ErrorPattern
    rate: int
    paths: tuple[Path, ...]

    @property
    def channel_set(self) -> frozenset:
        """All tokens (imaginary and real) on the paths."""
        return frozenset(tok for p in self.paths for tok in p.tokens)

    def predecessors(self) -> dict:
        """Map each real channel to the token preceding it on its path."""
        pred = {}
        for p in self.paths:
            toks = p.tokens
            for prev, cur in zip(toks, toks[1:]):
                pred[cur] = prev
        return pred

    def as_token_tuples(self) -> set[tuple]:
        return {p.tokens for p in self.paths}


def disjoint_paths(net: Network, t: str, rho: Iterable[str], w: int) -> PathFamily:
    """``w + |rho|`` channel-disjoint paths to ``t`` in the extended network.

    ``w`` paths start at the imaginary message channels and, for each
    ``e`` in ``rho``, one path starts at ``e'`` and runs through ``e``.
    Found by max-flow from a super-source that feeds ``s`` with capacity
    ``w`` and every ``head(e)`` through its (moved) channel ``e``.
    """
    rho = net.pattern(rho)
    members = set(rho)
    g = _FlowGraph()
    src_arc = g.add_arc(_AUX, net.source, w, "msg") if w > 0 else None
    for cid in rho:
        g.add_arc(_AUX, net.channel(cid).head, 1, cid)
    for ch in net.channels:
        if ch.id not in members:
            g.add_arc(ch.tail, ch.head, 1, ch.id)
    need = w + len(rho)
    got = g.max_flow(_AUX, t, limit=need)
    if got < need:
        raise InsufficientFlow(
            f"only {got} of {need} disjoint paths to {t!r} for pattern {list(rho)}")

    used = {a: g.flow_on(a) for a in range(0, len(g.head), 2)}

    def walk(first_arc: int) -> tuple[str, ...]:
        chans = []
        used[first_arc] -= 1
        if g.label[first_arc] != "msg":
            chans.append(g.label[first_arc])
        node = g.head[first_arc]
        while node != t:
            for a in g.adj[node]:
                if a % 2 == 0 and used.get(a, 0) > 0:
                    used[a] -= 1
                    chans.append(g.label[a])
                    node = g.head[a]
                    break
            else:  # pragma: no cover - flow conservation guarantees an exit
                raise InsufficientFlow("flow decomposition failed")
        return tuple(chans)

    paths = []
    for k in range(1, w + 1):
        paths.append(Path(MessageChannel(k), walk(src_arc)))
    for a in g.adj[_AUX]:
        if a % 2 == 0 and g.label[a] != "msg":
            paths.append(Path(ErrorChannel(g.label[a]), walk(a)))
    return PathFamily(t, rho, w, tuple(paths))


def patterns_of_size(net: Network, t: str, size: int):
    """All size-``size`` subsets of the connective set of ``t``."""
    return combinations(connective_set(net, t), size)
