"""Immutable homogeneous citation graph with dense integer indexing.

Nodes are papers, directed edges are citations whose target is also in
the corpus. String ids appear only at the boundary; all traversal works
on dense indices. Frontier expansion treats edges as undirected: being
cited is as informative as citing when recommending related work.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .corpus import PaperRecord


class NodeSet:
    """Set of node indices with O(1) membership and insertion-order iteration."""

    __slots__ = ("_order", "_members")

    def __init__(self, items: Iterable[int] = ()):
        self._order: list[int] = []
        self._members: set[int] = set()
        for item in items:
            self.add(item)

    def add(self, index: int) -> bool:
        """Insert an index; returns False if it was already present."""
        if index in self._members:
            return False
        self._members.add(index)
        self._order.append(index)
        return True

    def __contains__(self, index: object) -> bool:
        return index in self._members

    def __iter__(self) -> Iterator[int]:
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NodeSet):
            return self._members == other._members
        if isinstance(other, (set, frozenset)):
            return self._members == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"NodeSet({self._order!r})"

    def as_set(self) -> frozenset[int]:
        return frozenset(self._members)


@dataclass(frozen=True, eq=False)
class CitationGraph:
    """Directed citation graph; immutable after construction.

    out_edges[u] lists the papers u cites, in_edges[v] the papers citing v;
    both are sorted, duplicate-free, self-loop-free and mutually transposed.
    """

    node_ids: tuple[str, ...]
    index_of: dict[str, int]
    out_edges: tuple[tuple[int, ...], ...]
    in_edges: tuple[tuple[int, ...], ...]
    edge_count: int

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    def __len__(self) -> int:
        return len(self.node_ids)

    def _check_index(self, v: int) -> None:
        if not 0 <= v < len(self.node_ids):
            raise IndexError(f"node index {v} out of range [0, {len(self.node_ids)})")

    def neighbors(self, v: int, direction: str = "out") -> tuple[int, ...]:
        """Sorted, duplicate-free neighbor indices of v in the given direction."""
        self._check_index(v)
        if direction == "out":
            return self.out_edges[v]
        if direction == "in":
            return self.in_edges[v]
        if direction == "both":
            return tuple(sorted(set(self.out_edges[v]) | set(self.in_edges[v])))
        raise ValueError(f"direction must be out, in or both, got {direction!r}")

    def k_hop_frontier(self, sources: Iterable[int], k: int) -> NodeSet:
        """All nodes within undirected distance k of any source; k=0 is the sources."""
        if k < 0:
            raise ValueError("k must be >= 0")
        result = NodeSet()
        for s in sources:
            self._check_index(s)
            result.add(s)
        frontier: list[int] = list(result)
        for _ in range(k):
            discovered = {
                w
                for u in frontier
                for w in self.neighbors(u, "both")
                if w not in result
            }
            frontier = sorted(discovered)
            for w in frontier:
                result.add(w)
            if not frontier:
                break
        return result

    def induced_subgraph(self, nodes: Iterable[int]) -> tuple["CitationGraph", list[int]]:
        """Subgraph on `nodes` with dense relabeling.

        Keeps exactly the edges with both endpoints in `nodes`. Returns the
        new graph plus a back-map: new index -> index in this graph. Node
        order follows the iteration order of `nodes`.
        """
        back_map: list[int] = []
        new_index: dict[int, int] = {}
        for v in nodes:
            self._check_index(v)
            if v in new_index:
                continue
            new_index[v] = len(back_map)
            back_map.append(v)
        out_lists: list[tuple[int, ...]] = []
        for v in back_map:
            out_lists.append(tuple(sorted(
                new_index[w] for w in self.out_edges[v] if w in new_index
            )))
        sub = _from_adjacency(tuple(self.node_ids[v] for v in back_map), out_lists)
        return sub, back_map

    def edges(self) -> Iterator[tuple[int, int]]:
        """Directed edges as (u, v) index pairs, ascending by u then v."""
        for u, targets in enumerate(self.out_edges):
            for v in targets:
                yield u, v


def _from_adjacency(node_ids: tuple[str, ...],
                    out_lists: Sequence[Sequence[int]]) -> CitationGraph:
    n = len(node_ids)
    index_of = {pid: i for i, pid in enumerate(node_ids)}
    if len(index_of) != n:
        raise ValueError("duplicate node ids")
    incoming: list[list[int]] = [[] for _ in range(n)]
    edge_count = 0
    out_edges: list[tuple[int, ...]] = []
    for u, targets in enumerate(out_lists):
        deduped = sorted(set(targets))
        if deduped and (deduped[0] < 0 or deduped[-1] >= n):
            raise ValueError("edge target out of range")
        if u in deduped:
            raise ValueError(f"self-loop at node {u}")
        out_edges.append(tuple(deduped))
        edge_count += len(deduped)
        for v in deduped:
            incoming[v].append(u)
    in_edges = tuple(tuple(sorted(srcs)) for srcs in incoming)
    return CitationGraph(node_ids=node_ids, index_of=index_of,
                         out_edges=tuple(out_edges), in_edges=in_edges,
                         edge_count=edge_count)


def build_graph(records: Sequence[PaperRecord]) -> CitationGraph:
    """Build the citation graph for a corpus split.

    One node per record in input order; one directed edge per citation
    whose target id is itself a corpus member. Citations pointing outside
    the split are kept in the records (they still define ground-truth
    relevance) but produce no edge.
    """
    node_ids = tuple(r.id for r in records)
    index_of: dict[str, int] = {}
    for i, pid in enumerate(node_ids):
        if pid in index_of:
            raise ValueError(f"duplicate paper id {pid!r}")
        index_of[pid] = i
    out_lists = []
    for u, record in enumerate(records):
        targets = {index_of[c] for c in record.citations if c in index_of}
        targets.discard(u)
        out_lists.append(sorted(targets))
    return _from_adjacency(node_ids, out_lists)


_MAGIC = b"CGR1"


def save_snapshot(graph: CitationGraph, path: str) -> None:
    """Write the binary snapshot: magic, LE64 counts, id table, adjacency."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", graph.node_count, graph.edge_count))
        for pid in graph.node_ids:
            raw = pid.encode("utf-8")
            fh.write(struct.pack("<Q", len(raw)))
            fh.write(raw)
        fh.write(struct.pack(f"<{graph.node_count}Q",
                             *(len(t) for t in graph.out_edges)))
        flat = [v for targets in graph.out_edges for v in targets]
        if flat:
            fh.write(struct.pack(f"<{len(flat)}Q", *flat))


def load_snapshot(path: str) -> CitationGraph:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != _MAGIC:
        raise ValueError("not a citation-graph snapshot (bad magic)")
    try:
        offset = 4
        node_count, edge_count = struct.unpack_from("<QQ", data, offset)
        offset += 16
        ids = []
        for _ in range(node_count):
            (length,) = struct.unpack_from("<Q", data, offset)
            offset += 8
            ids.append(data[offset:offset + length].decode("utf-8"))
            offset += length
        degrees = struct.unpack_from(f"<{node_count}Q", data, offset)
        offset += 8 * node_count
        flat = struct.unpack_from(f"<{sum(degrees)}Q", data, offset)
    except (struct.error, UnicodeDecodeError, OverflowError, MemoryError) as exc:
        raise ValueError(f"truncated or corrupt snapshot: {exc}") from exc
    out_lists: list[tuple[int, ...]] = []
    pos = 0
    for d in degrees:
        out_lists.append(flat[pos:pos + d])
        pos += d
    graph = _from_adjacency(tuple(ids), out_lists)
    if graph.edge_count != edge_count:
        raise ValueError("snapshot edge count does not match adjacency data")
    return graph


def write_edge_list(graph: CitationGraph, path: str) -> None:
    """Debug export: one 'source_id target_id' line per directed edge."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in graph.edges():
            fh.write(f"{graph.node_ids[u]} {graph.node_ids[v]}\n")
